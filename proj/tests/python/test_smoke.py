import math

import pytest

import jacobi_lab as jl


def test_closed_form_phi():
    h3 = jl.JacobiParameters.preset("h3")
    assert abs(jl.phi(h3, 2.0, 1.0) - math.sin(2.0) / (2.0 * math.sinh(1.0))) < 1e-12
    assert abs(jl.plancherel_density(h3, 3.0) - 9.0) < 1e-9


def test_parameters():
    p = jl.JacobiParameters(1.2, 0.3)
    assert p.rho == pytest.approx(2.5)
    assert "generic" in jl.JacobiParameters.preset_names()
    with pytest.raises(jl.DomainError):
        jl.JacobiParameters(0.2, 0.5)


def test_roundtrip():
    p = jl.JacobiParameters.preset("generic")
    r = jl.radial_grid(p)
    s = jl.spectral_grid(p)
    f = jl.sample(r, lambda t: math.exp(-((t - 1.5) ** 2) / 0.18) + math.exp(-((t + 1.5) ** 2) / 0.18))
    back = jl.inverse(p, s, jl.transform(p, r, f, s), r)
    err = math.sqrt(sum(abs(a - b) ** 2 * w for a, b, w in zip(back, f, r.mu_weights)))
    assert err / jl.l2_norm(r, f) < 1e-6
    assert jl.plancherel_defect(p, r, f, s) < 1e-6


def test_heat_kernel_h3():
    h3 = jl.JacobiParameters.preset("h3")
    r = jl.radial_grid(h3)
    s = jl.spectral_grid(h3)
    h = jl.heat_kernel(h3, 0.5, r, s)
    t = r.nodes[400]
    exact = t * math.exp(-0.5 - t * t / 2.0) / (8.0 * math.sqrt(math.pi) * 0.5**1.5 * math.sinh(t))
    assert abs(h[400] - exact) < 1e-10


def test_decay_error():
    p = jl.JacobiParameters.preset("generic")
    r = jl.radial_grid(p)
    s = jl.spectral_grid(p)
    with pytest.raises(jl.DecayError):
        jl.transform(p, r, [1.0] * len(r), s)


def test_cli_in_process():
    code, out, _ = jl.run_cli(["eval", "c", "--preset", "h3", "--lambda", "3"])
    assert code == 0
    assert float(out.splitlines()[-1].split(",")[-1]) == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert jl.run_cli(["eval", "phi", "--preset", "nope"])[0] == 2
