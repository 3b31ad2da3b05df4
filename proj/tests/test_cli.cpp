#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "doctest.h"
#include "jacobi/cli.hpp"

namespace fs = std::filesystem;
using jacobi::cli::ExitCode;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream o, e;
    const int c = jacobi::cli::run(args, o, e);
    return {c, o.str(), e.str()};
}

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("jacobi-cli-" + std::to_string(::getpid())) / name;
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("eval") {
    auto r = run({"eval", "phi", "--preset", "h3", "--lambda", "2", "--t", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("lambda_re,lambda_im,t,re,im") != std::string::npos);
    const double v = std::sin(2.0) / (2.0 * std::sinh(1.0));
    const auto last = r.out.substr(r.out.rfind('\n', r.out.size() - 2) + 1);
    CHECK(std::stod(last.substr(last.find(",1,") + 3)) == doctest::Approx(v).epsilon(1e-12));

    r = run({"eval", "omega", "--preset", "h3", "--lambda", "2"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("lambda_re,lambda_im,re,im") != std::string::npos);

    r = run({"eval", "kernel-K", "--s", "0.5", "--t", "0.7", "--u", "1.3"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find(",0,0") != std::string::npos);
}

TEST_CASE("bad input exits with 2") {
    CHECK(run({"eval", "phi", "--preset", "nope"}).code == ExitCode::kBadInput);
    CHECK(run({"eval", "zeta"}).code == ExitCode::kBadInput);
    CHECK(run({"frobnicate"}).code == ExitCode::kBadInput);
    CHECK(run({"eval", "phi", "--alpha", "0.2", "--beta", "0.5"}).code == ExitCode::kBadInput);
    CHECK(run({"eval", "phi", "--R0", "2"}).code == ExitCode::kBadInput);
    CHECK(run({"--help"}).code == ExitCode::kOk);

    const auto d = scratch("bad");
    std::ofstream(d / "empty.csv") << "t,re,im\n";
    CHECK(run({"transform", "--input", (d / "empty.csv").string(), "--output-dir", d.string()}).code ==
          ExitCode::kBadInput);
    std::ofstream(d / "hdr.csv") << "x,y\n1,2\n";
    CHECK(run({"transform", "--input", (d / "hdr.csv").string(), "--output-dir", d.string()}).code ==
          ExitCode::kBadInput);
    CHECK(run({"transform", "--input", (d / "missing.csv").string(), "--output-dir", d.string()}).code ==
          ExitCode::kBadInput);
    std::ofstream(d / "cfg.json") << R"({"alpha": 1.2, "bogus": 1})";
    CHECK(run({"grid", "radial", "--config", (d / "cfg.json").string(), "--output-dir", d.string()}).code ==
          ExitCode::kBadInput);
}

TEST_CASE("non-decaying input exits with 3") {
    const auto d = scratch("decay");
    {
        std::ofstream f(d / "flat.csv");
        f << "t,re,im\n";
        for (int i = 0; i <= 200; ++i) f << 0.1 * i << ",1,0\n";
    }
    CHECK(run({"transform", "--input", (d / "flat.csv").string(), "--output-dir", d.string()}).code ==
          ExitCode::kDecayFailure);
}

TEST_CASE("heat, transform and roundtrip with manifests") {
    const auto d = scratch("heat");
    auto r = run({"heat", "--s", "0.5", "--output-dir", d.string()});
    REQUIRE(r.code == 0);
    const auto heat = slurp(d / "heat.csv");
    CHECK(heat.rfind("# jacobi-lab 0.1.0 config=", 0) == 0);
    CHECK(heat.find("\nt,re,im\n") != std::string::npos);
    const auto man = nlohmann::json::parse(slurp(d / "heat.manifest.json"));
    CHECK(man["command"] == "heat");
    CHECK(man["version"] == "0.1.0");
    CHECK(man["outputs"].size() == 1);

    r = run({"transform", "--input", (d / "heat.csv").string(), "--roundtrip", "--output-dir", d.string()});
    REQUIRE(r.code == 0);
    const auto rt = slurp(d / "roundtrip.csv");
    const auto pos = rt.find("roundtrip_l2_error,");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(rt.substr(pos + 19)) < 1e-6);
    CHECK(fs::exists(d / "transform.csv"));
}

TEST_CASE("outputs are deterministic") {
    const auto a = scratch("det-a"), b = scratch("det-b");
    REQUIRE(run({"grid", "spectral", "--spectral-panels", "20", "--output-dir", a.string()}).code == 0);
    REQUIRE(run({"grid", "spectral", "--spectral-panels", "20", "--output-dir", b.string()}).code == 0);
    CHECK(slurp(a / "grid-spectral.csv") == slurp(b / "grid-spectral.csv"));
    CHECK(slurp(a / "grid-spectral.manifest.json") == slurp(b / "grid-spectral.manifest.json"));
    REQUIRE(run({"grid", "spectral", "--spectral-panels", "21", "--output-dir", b.string()}).code == 0);
    const auto ha = slurp(a / "grid-spectral.csv"), hb = slurp(b / "grid-spectral.csv");
    CHECK(ha.substr(0, ha.find('\n')) != hb.substr(0, hb.find('\n')));
}

TEST_CASE("output directory precedence") {
    const auto env = scratch("env"), flag = scratch("flag"), cfg = scratch("cfg");
    std::ofstream(cfg / "c.json") << R"({"output_dir": ")" + cfg.string() + R"("})";
    ::setenv("JACOBI_OUTPUT_DIR", env.string().c_str(), 1);
    REQUIRE(run({"grid", "radial", "--radial-panels", "4", "--config", (cfg / "c.json").string()}).code == 0);
    CHECK(fs::exists(env / "grid-radial.csv"));
    CHECK_FALSE(fs::exists(cfg / "grid-radial.csv"));
    REQUIRE(run({"grid", "radial", "--radial-panels", "4", "--output-dir", flag.string(), "--output", "g.csv"}).code == 0);
    CHECK(fs::exists(flag / "g.csv"));
    CHECK(fs::exists(flag / "g.manifest.json"));
    ::unsetenv("JACOBI_OUTPUT_DIR");
    REQUIRE(run({"grid", "radial", "--radial-panels", "4", "--config", (cfg / "c.json").string()}).code == 0);
    CHECK(fs::exists(cfg / "grid-radial.csv"));
}

TEST_CASE("reports") {
    const auto d = scratch("report");
    auto r = run({"report", "gangolli", "--kmax", "64", "--output-dir", d.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "gangolli.csv").find("k_max,C,d,raw_slope,samples") != std::string::npos);
    r = run({"report", "c-asymptotics", "--preset", "h3", "--n", "5", "--output-dir", d.string()});
    REQUIRE(r.code == 0);
    CHECK(fs::exists(d / "c-asymptotics.csv"));
    r = run({"report", "hormander-w", "--output-dir", d.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(d / "hormander-w-fit.csv").find("w_exponent") != std::string::npos);
}

TEST_CASE("probe-theorem flags excluded members") {
    const auto d = scratch("probe");
    std::ofstream(d / "fam.json") << R"j({"members": [
        {"label": "gauss", "expression": "exp(-0.1*lambda^2)/omega(lambda)"},
        {"label": "odd", "expression": "exp(-0.1*lambda^2)*(1+lambda)/omega(lambda)"}]})j";
    const auto r = run({"probe-theorem", "--family", (d / "fam.json").string(), "--trials", "3", "--radial-panels",
                        "100", "--spectral-panels", "80", "--output-dir", d.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("verdict") != std::string::npos);
    const auto csv = slurp(d / "probe-theorem.csv");
    CHECK(csv.find("experiment,member,p,lower_bound,proxy_norm,ratio,flags") != std::string::npos);
    CHECK(csv.find("not-even") != std::string::npos);
    CHECK(csv.find("proxy=mihlin-surrogate") != std::string::npos);
}
