#include "jacobi/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "io.hpp"
#include "jacobi/convolution.hpp"
#include "jacobi/errors.hpp"
#include "jacobi/multiplier.hpp"

namespace jacobi::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
    JacobiParameters params = JacobiParameters::preset("generic");
    GridConfig grids;
    double R0 = kDefaultR0;
    PrecisionConfig precision;
    std::uint64_t seed = 1;
    std::string output_dir;

    json to_json() const {
        return {{"alpha", params.alpha},
                {"beta", params.beta},
                {"relaxed", params.relaxed},
                {"grids",
                 {{"T_max", grids.T_max},
                  {"radial_panels", grids.radial_panels},
                  {"radial_order", grids.radial_order},
                  {"Lambda_max", grids.Lambda_max},
                  {"spectral_panels", grids.spectral_panels},
                  {"spectral_order", grids.spectral_order}}},
                {"cutoffs", {{"R0", R0}}},
                {"precision",
                 {{"series_tol", precision.series_tol},
                  {"max_terms", precision.max_terms},
                  {"asymptotic_crossover", precision.asymptotic_crossover}}},
                {"seed", seed}};
    }
};

struct CommonFlags {
    std::string config, preset, output_dir, output;
    double alpha = kUnset, beta = kUnset;
    double T_max = kUnset, Lambda_max = kUnset, R0 = kUnset;
    int radial_panels = -1, radial_order = -1, spectral_panels = -1, spectral_order = -1;
    double series_tol = kUnset, crossover = kUnset;
    int max_terms = -1;
    long long seed = -1;
};

void add_common(CLI::App* app, CommonFlags& f) {
    app->add_option("--config", f.config, "JSON run configuration");
    app->add_option("--preset", f.preset, "h3 | generic | damek-ricci-like");
    app->add_option("--alpha", f.alpha);
    app->add_option("--beta", f.beta);
    app->add_option("--T-max", f.T_max, "radial cutoff");
    app->add_option("--radial-panels", f.radial_panels);
    app->add_option("--radial-order", f.radial_order);
    app->add_option("--lambda-max", f.Lambda_max, "spectral cutoff");
    app->add_option("--spectral-panels", f.spectral_panels);
    app->add_option("--spectral-order", f.spectral_order);
    app->add_option("--R0", f.R0, "cutoff radius in (1, sqrt(pi/2))");
    app->add_option("--series-tol", f.series_tol);
    app->add_option("--max-terms", f.max_terms);
    app->add_option("--crossover", f.crossover, "Bessel series/asymptotic switch");
    app->add_option("--seed", f.seed);
    app->add_option("--output-dir", f.output_dir);
    app->add_option("--output", f.output, "output file name");
}

template <class T>
void take(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : keys) ok = ok || it.key() == k;
        if (!ok) throw SchemaError(where + ": unknown key '" + it.key() + "'");
    }
}

RunConfig resolve_config(const CommonFlags& f) {
    RunConfig c;
    double alpha = c.params.alpha, beta = c.params.beta;
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        if (!in) throw SchemaError("cannot open config " + f.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw SchemaError("config: " + std::string(e.what()));
        }
        if (!j.is_object()) throw SchemaError("config: top level must be an object");
        reject_unknown(j, {"preset", "alpha", "beta", "grids", "cutoffs", "precision", "seed", "output_dir"}, "config");
        if (j.contains("preset")) {
            const auto p = JacobiParameters::preset(j.at("preset").get<std::string>());
            alpha = p.alpha;
            beta = p.beta;
        }
        take(j, "alpha", alpha);
        take(j, "beta", beta);
        if (j.contains("grids")) {
            const auto& g = j.at("grids");
            reject_unknown(g, {"T_max", "radial_panels", "radial_order", "Lambda_max", "spectral_panels", "spectral_order"},
                           "config.grids");
            take(g, "T_max", c.grids.T_max);
            take(g, "radial_panels", c.grids.radial_panels);
            take(g, "radial_order", c.grids.radial_order);
            take(g, "Lambda_max", c.grids.Lambda_max);
            take(g, "spectral_panels", c.grids.spectral_panels);
            take(g, "spectral_order", c.grids.spectral_order);
        }
        if (j.contains("cutoffs")) {
            reject_unknown(j.at("cutoffs"), {"R0"}, "config.cutoffs");
            take(j.at("cutoffs"), "R0", c.R0);
        }
        if (j.contains("precision")) {
            const auto& p = j.at("precision");
            reject_unknown(p, {"series_tol", "max_terms", "asymptotic_crossover"}, "config.precision");
            take(p, "series_tol", c.precision.series_tol);
            take(p, "max_terms", c.precision.max_terms);
            take(p, "asymptotic_crossover", c.precision.asymptotic_crossover);
        }
        take(j, "seed", c.seed);
        take(j, "output_dir", c.output_dir);
    }
    if (!f.preset.empty()) {
        const auto p = JacobiParameters::preset(f.preset);
        alpha = p.alpha;
        beta = p.beta;
    }
    if (!std::isnan(f.alpha)) alpha = f.alpha;
    if (!std::isnan(f.beta)) beta = f.beta;
    c.params = JacobiParameters::make(alpha, beta, true);
    if (!std::isnan(f.T_max)) c.grids.T_max = f.T_max;
    if (f.radial_panels >= 0) c.grids.radial_panels = f.radial_panels;
    if (f.radial_order >= 0) c.grids.radial_order = f.radial_order;
    if (!std::isnan(f.Lambda_max)) c.grids.Lambda_max = f.Lambda_max;
    if (f.spectral_panels >= 0) c.grids.spectral_panels = f.spectral_panels;
    if (f.spectral_order >= 0) c.grids.spectral_order = f.spectral_order;
    if (!std::isnan(f.R0)) c.R0 = f.R0;
    if (!std::isnan(f.series_tol)) c.precision.series_tol = f.series_tol;
    if (f.max_terms >= 0) c.precision.max_terms = f.max_terms;
    if (!std::isnan(f.crossover)) c.precision.asymptotic_crossover = f.crossover;
    if (f.seed >= 0) c.seed = static_cast<std::uint64_t>(f.seed);
    if (const char* env = std::getenv("JACOBI_OUTPUT_DIR"); env && *env) c.output_dir = env;
    if (!f.output_dir.empty()) c.output_dir = f.output_dir;
    if (c.output_dir.empty()) c.output_dir = ".";
    c.grids.validate();
    c.precision.validate();
    CutoffPair::make(c.R0);
    return c;
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return hex64(fnv1a(ss.str()));
}

// Collects output files and writes them, plus a manifest, once the command has
// finished computing.
class OutputSet {
public:
    OutputSet(const RunConfig& cfg, const std::string& command, json args, const std::string& output_override)
        : cfg_(cfg), command_(command), override_(output_override) {
        json all{{"command", command}, {"args", std::move(args)}, {"config", cfg.to_json()}};
        record_ = all;
        hash_ = hex64(fnv1a(all.dump()));
    }

    const std::string& hash() const { return hash_; }

    std::string header() const {
        return std::string("# ") + kToolName + " " + kVersion + " config=" + hash_ + "\n";
    }

    // The first file honours --output; later ones are named after it.
    void add(const std::string& default_name, const std::string& body) {
        std::string name = default_name;
        if (!override_.empty()) {
            if (files_.empty()) {
                name = override_;
            } else {
                const fs::path o(override_);
                name = (o.parent_path() / (o.stem().string() + "-" + default_name)).string();
            }
        }
        fs::path path(name);
        if (path.is_relative()) path = fs::path(cfg_.output_dir) / path;
        files_.push_back({path, header() + body});
    }

    std::vector<fs::path> commit() {
        if (files_.empty()) return {};
        json manifest = record_;
        manifest["tool"] = kToolName;
        manifest["version"] = kVersion;
        manifest["config_hash"] = hash_;
        json outs = json::array();
        for (const auto& f : files_) outs.push_back(f.first.filename().string());
        manifest["outputs"] = outs;
        std::vector<fs::path> written;
        for (const auto& f : files_) {
            write_atomic(f.first, f.second);
            written.push_back(f.first);
        }
        auto mpath = files_.front().first;
        mpath.replace_extension(".manifest.json");
        write_atomic(mpath, manifest.dump(2) + "\n");
        written.push_back(mpath);
        return written;
    }

private:
    RunConfig cfg_;
    std::string command_, override_, hash_;
    json record_;
    std::vector<std::pair<fs::path, std::string>> files_;
};

std::string num(double v) { return format_number(v); }

std::string samples_csv(const std::string& x_name, const std::vector<double>& x, const std::vector<cplx>& y) {
    std::string s = x_name + ",re,im\n";
    for (std::size_t i = 0; i < x.size(); ++i) s += num(x[i]) + "," + num(y[i].real()) + "," + num(y[i].imag()) + "\n";
    return s;
}

RadialGridPtr radial_grid(const RunConfig& c) {
    return make_radial_grid(c.params, c.grids.T_max, c.grids.radial_panels, c.grids.radial_order);
}

SpectralGridPtr spectral_grid(const RunConfig& c) {
    return make_spectral_grid(c.params, c.grids.Lambda_max, c.grids.spectral_panels, c.grids.spectral_order);
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return x;
}

void announce(std::ostream& out, const std::vector<fs::path>& files) {
    for (const auto& f : files) out << "wrote " << f.string() << "\n";
}

struct EvalArgs {
    std::string what;
    double lambda = 0.0, lambda_im = 0.0, t = 0.0, s = kUnset, u = kUnset;
};

int cmd_eval(const RunConfig& c, const EvalArgs& a, std::ostream& out) {
    const cplx l(a.lambda, a.lambda_im);
    if (a.what == "phi") {
        const cplx v = jacobi_phi(c.params, l, a.t, c.precision);
        out << "lambda_re,lambda_im,t,re,im\n"
            << num(a.lambda) << "," << num(a.lambda_im) << "," << num(a.t) << "," << num(v.real()) << ","
            << num(v.imag()) << "\n";
    } else if (a.what == "c") {
        const cplx v = c_function(c.params, l);
        out << "lambda_re,lambda_im,re,im,abs\n"
            << num(a.lambda) << "," << num(a.lambda_im) << "," << num(v.real()) << "," << num(v.imag()) << ","
            << num(std::abs(v)) << "\n";
    } else if (a.what == "omega") {
        const cplx v = omega(c.params, l);
        out << "lambda_re,lambda_im,re,im\n"
            << num(a.lambda) << "," << num(a.lambda_im) << "," << num(v.real()) << "," << num(v.imag()) << "\n";
    } else {
        if (std::isnan(a.s) || std::isnan(a.u)) throw DomainError("eval kernel-K needs --s, --t and --u");
        const auto k = kernel_K(c.params, a.s, a.t, a.u);
        out << "s,t,u,value,in_support\n"
            << num(a.s) << "," << num(a.t) << "," << num(a.u) << "," << num(k.value) << "," << (k.in_support ? 1 : 0)
            << "\n";
    }
    return kOk;
}

SampledRadialFunction radial_input(const std::string& path, const RadialGridPtr& grid) {
    const auto t = read_samples(path, "t");
    return {grid, resample(t, grid->nodes)};
}

SampledSpectralFunction spectral_input(const std::string& path, const SpectralGridPtr& grid) {
    const auto t = read_samples(path, "lambda");
    return {grid, resample(t, grid->nodes)};
}

int cmd_transform(const RunConfig& c, const CommonFlags& f, const std::string& input, bool roundtrip,
                  std::ostream& out) {
    const auto rg = radial_grid(c);
    const auto sg = spectral_grid(c);
    const auto fn = radial_input(input, rg);
    OutputSet os(c, "transform", {{"input", file_digest(input)}, {"roundtrip", roundtrip}}, f.output);
    const auto fh = jacobi_transform(c.params, fn, sg);
    os.add("transform.csv", samples_csv("lambda", sg->nodes, fh.values));
    if (roundtrip) {
        const auto back = inverse_transform(c.params, fh, rg);
        const double rt = relative_l2_error(back, fn);
        const double pd = plancherel_defect(c.params, fn, sg);
        const std::string body =
            "quantity,value\nroundtrip_l2_error," + num(rt) + "\nplancherel_defect," + num(pd) + "\n";
        os.add("roundtrip.csv", body);
        out << body;
    }
    announce(out, os.commit());
    return kOk;
}

int cmd_inverse(const RunConfig& c, const CommonFlags& f, const std::string& input, std::ostream& out) {
    const auto rg = radial_grid(c);
    const auto sg = spectral_grid(c);
    const auto g = spectral_input(input, sg);
    OutputSet os(c, "inverse", {{"input", file_digest(input)}}, f.output);
    const auto fn = inverse_transform(c.params, g, rg);
    os.add("inverse.csv", samples_csv("t", rg->nodes, fn.values));
    announce(out, os.commit());
    return kOk;
}

struct ConvArgs {
    std::string f, g;
    double T_max = 10.0;
    int panels = 50, order = 8;
    int budget = static_cast<int>(kDefaultConvolutionBudget);
};

int cmd_convolve(const RunConfig& c, const CommonFlags& fl, const ConvArgs& a, std::ostream& out) {
    if (a.budget < 1) throw DomainError("convolve: budget must be >= 1");
    const auto grid = make_radial_grid(c.params, a.T_max, a.panels, a.order);
    const auto f = radial_input(a.f, grid);
    const auto g = radial_input(a.g, grid);
    OutputSet os(c, "convolve",
                 {{"f", file_digest(a.f)},
                  {"g", file_digest(a.g)},
                  {"T_max", a.T_max},
                  {"panels", a.panels},
                  {"order", a.order},
                  {"budget", a.budget}},
                 fl.output);
    const auto h = convolve(c.params, f, g, static_cast<std::size_t>(a.budget));
    os.add("convolve.csv", samples_csv("t", grid->nodes, h.values));
    announce(out, os.commit());
    return kOk;
}

int cmd_heat(const RunConfig& c, const CommonFlags& f, double s, bool spectral, std::ostream& out) {
    if (!(s > 0.0)) throw DomainError("heat: --s must be > 0");
    const auto sg = spectral_grid(c);
    OutputSet os(c, "heat", {{"s", s}, {"spectral", spectral}}, f.output);
    if (spectral) {
        os.add("heat-spectral.csv", samples_csv("lambda", sg->nodes, heat_multiplier(sg, s).values));
    } else {
        const auto rg = radial_grid(c);
        os.add("heat.csv", samples_csv("t", rg->nodes, heat_kernel(c.params, s, rg, sg).values));
    }
    announce(out, os.commit());
    return kOk;
}

int cmd_grid(const RunConfig& c, const CommonFlags& f, const std::string& which, std::ostream& out) {
    OutputSet os(c, "grid", {{"which", which}}, f.output);
    std::string body;
    if (which == "radial") {
        const auto g = radial_grid(c);
        body = "t,weight,mu_weight\n";
        for (std::size_t i = 0; i < g->size(); ++i)
            body += num(g->nodes[i]) + "," + num(g->base_weights[i]) + "," + num(g->mu_weights[i]) + "\n";
    } else {
        const auto g = spectral_grid(c);
        body = "lambda,weight,nu_weight\n";
        for (std::size_t i = 0; i < g->size(); ++i)
            body += num(g->nodes[i]) + "," + num(g->base_weights[i]) + "," + num(g->nu_weights[i]) + "\n";
    }
    os.add("grid-" + which + ".csv", body);
    announce(out, os.commit());
    return kOk;
}

struct ReportArgs {
    std::string kind;
    double lmin = 1.0, lmax = 400.0, fit_lo = 40.0;
    int n = 40, kmax = 64;
};

int cmd_report(const RunConfig& c, const CommonFlags& f, const ReportArgs& a, std::ostream& out) {
    const auto& p = c.params;
    json args{{"kind", a.kind}, {"lmin", a.lmin}, {"lmax", a.lmax}, {"n", a.n}, {"kmax", a.kmax}, {"fit_lo", a.fit_lo}};
    OutputSet os(c, "report", args, f.output);
    if (a.kind == "c-asymptotics") {
        if (!(a.lmin > 0.0 && a.lmax > a.lmin) || a.n < 2) throw DomainError("report: need 0 < lmin < lmax and n >= 2");
        std::string body = "lambda,density,density_ratio,derivative_scaled,log_derivative_scaled,inv_abs_c_minus\n";
        for (const auto& r : c_asymptotics_report(p, log_grid(a.lmin, a.lmax, a.n)))
            body += num(r.lambda) + "," + num(r.density) + "," + num(r.density_ratio) + "," + num(r.derivative_scaled) +
                    "," + num(r.log_derivative_scaled) + "," + num(r.inv_abs_c_minus) + "\n";
        os.add("c-asymptotics.csv", body);
    } else if (a.kind == "gangolli") {
        const std::vector<cplx> lambdas{0.5, 1.0, 2.0, 4.0, 8.0, 16.0};
        std::string body = "k_max,C,d,raw_slope,samples\n";
        std::vector<int> ks{a.kmax};
        if (a.kmax / 2 >= 16) ks.insert(ks.begin(), a.kmax / 2);
        for (int k : ks) {
            const auto g = gangolli_fit(p, k, lambdas);
            body += std::to_string(k) + "," + num(g.C) + "," + num(g.d) + "," + num(g.raw_slope) + "," +
                    std::to_string(g.samples) + "\n";
        }
        os.add("gangolli.csv", body);
    } else if (a.kind == "expansion-errors") {
        const auto st = expansion_error_study(p);
        std::string body = "regime,lambda,t,error\n";
        for (const auto& e : st.t_samples) body += "small," + num(e.lambda) + "," + num(e.t) + "," + num(e.error) + "\n";
        for (const auto& e : st.lambda_samples)
            body += "large," + num(e.lambda) + "," + num(e.t) + "," + num(e.error) + "\n";
        os.add("expansion-errors.csv", body);
        std::string fit = "quantity,exponent,window_lo,window_hi,pass\n";
        if (st.exact) {
            fit += "exact,0,0,0,1\n";
        } else {
            const double te = st.t_fit.exponent, le = st.lambda_fit.exponent;
            const double bound = -(p.alpha + 2.0) + 0.5;
            fit += "t_exponent," + num(te) + ",3.5,4.5," + std::to_string(te >= 3.5 && te <= 4.5) + "\n";
            fit += "lambda_exponent," + num(le) + ",-inf," + num(bound) + "," + std::to_string(le <= bound) + "\n";
        }
        os.add("expansion-errors-fit.csv", fit);
        out << fit;
    } else {
        if (!(a.lmin >= 1.0 && a.lmax > a.fit_lo && a.fit_lo >= a.lmin) || a.n < 3)
            throw DomainError("report hormander-w: need 1 <= lmin <= fit-lo < lmax and n >= 3");
        std::string body = "lambda,abs_w,abs_dw\n";
        for (double l : log_grid(a.lmin, a.lmax, a.n)) {
            const double h = 1e-3 * l;
            const double dw = std::abs((w_function(p, l + h) - w_function(p, l - h)) / (2.0 * h));
            body += num(l) + "," + num(std::abs(w_function(p, l))) + "," + num(dw) + "\n";
        }
        os.add("hormander-w.csv", body);
        const auto fit = w_slope_fit(p, a.fit_lo, a.lmax);
        const auto hc = hormander_check([&](double l) { return w_function(p, l); }, a.lmin, a.lmax);
        const auto cut = CutoffPair::make(c.R0);
        double ps = 0.0;
        for (double l : log_grid(1e-3, a.lmax, 400)) ps = std::max(ps, std::abs(p_s_function(p, cut, l)));
        std::string s = "quantity,value,target,tolerance,pass\n";
        s += "w_exponent," + num(fit.w.exponent) + "," + num(-p.alpha) + ",0.1," +
             std::to_string(std::abs(fit.w.exponent + p.alpha) <= 0.1) + "\n";
        s += "dw_exponent," + num(fit.dw.exponent) + ",-0.5,0.1," + std::to_string(fit.dw.exponent <= -0.4) + "\n";
        s += "sup_w," + num(hc.sup_g) + ",,," + std::to_string(std::isfinite(hc.sup_g)) + "\n";
        s += "sup_lambda_dw," + num(hc.sup_lg1) + ",,," + std::to_string(std::isfinite(hc.sup_lg1)) + "\n";
        s += "sup_lambda2_d2w," + num(hc.sup_l2g2) + ",,," + std::to_string(std::isfinite(hc.sup_l2g2)) + "\n";
        s += "sup_P_s," + num(ps) + ",,," + std::to_string(std::isfinite(ps)) + "\n";
        os.add("hormander-w-fit.csv", s);
        out << s;
    }
    announce(out, os.commit());
    return kOk;
}

struct ProbeArgs {
    std::string family;
    double p = 2.0;
    int trials = 24;
};

std::vector<MultiplierSpec> load_family(const std::string& path, const JacobiParameters& p, std::string& experiment) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open manifest " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError("manifest: " + std::string(e.what()));
    }
    if (!j.is_object() || !j.contains("members") || !j.at("members").is_array() || j.at("members").empty())
        throw SchemaError("manifest: expected an object with a non-empty 'members' array");
    reject_unknown(j, {"experiment", "members"}, "manifest");
    if (j.contains("experiment")) {
        if (!j.at("experiment").is_string()) throw SchemaError("manifest: 'experiment' must be a string");
        experiment = j.at("experiment").get<std::string>();
        if (experiment.find_first_of(",\n") != std::string::npos)
            throw SchemaError("manifest: experiment name may not contain ',' or newlines");
    }
    std::vector<MultiplierSpec> out;
    std::map<std::string, int> seen;
    for (const auto& m : j.at("members")) {
        if (!m.is_object() || !m.contains("label") || !m.contains("expression") || !m.at("label").is_string() ||
            !m.at("expression").is_string())
            throw SchemaError("manifest: each member needs string 'label' and 'expression'");
        reject_unknown(m, {"label", "expression", "decay"}, "manifest member");
        const auto label = m.at("label").get<std::string>();
        if (label.empty() || label.find_first_of(",\n") != std::string::npos)
            throw SchemaError("manifest: bad label '" + label + "'");
        if (seen[label]++) throw SchemaError("manifest: duplicate label '" + label + "'");
        DecayClass decay = DecayClass::rapidly_decreasing;
        if (m.contains("decay")) {
            if (!m.at("decay").is_string()) throw SchemaError("manifest: 'decay' must be a string");
            decay = decay_class_from_string(m.at("decay").get<std::string>());
        }
        out.push_back(multiplier_from_expression(p, m.at("expression").get<std::string>(), label, decay));
    }
    return out;
}

int cmd_probe(const RunConfig& c, const CommonFlags& f, const ProbeArgs& a, std::ostream& out) {
    if (!(a.p > 1.0) || std::isinf(a.p)) throw DomainError("probe-theorem: --p must lie in (1, inf)");
    if (a.trials < 1) throw DomainError("probe-theorem: --trials must be >= 1");
    ProbeOptions opts;
    opts.p = a.p;
    opts.seed = c.seed;
    opts.trials = a.trials;
    opts.grids = c.grids;
    opts.refined = c.grids;
    opts.refined.radial_panels = c.grids.radial_panels * 3 / 2;
    opts.refined.spectral_panels = c.grids.spectral_panels * 3 / 2;
    const auto family = load_family(a.family, c.params, opts.experiment);
    OutputSet os(c, "probe-theorem",
                 {{"family", file_digest(a.family)}, {"p", a.p}, {"trials", a.trials}}, f.output);
    const auto res = theorem_ratio_experiment(c.params, family, opts);

    std::string body = "# proxy_norm is the Mihlin surrogate sup|g| + sup|lambda g'| of (omega m) on Im = rho\n";
    body += "experiment,member,p,lower_bound,proxy_norm,ratio,flags\n";
    int included = 0;
    for (const auto& r : res.rows) {
        std::string flags;
        for (const auto& fl : r.flags) flags += (flags.empty() ? "" : ";") + fl;
        if (!r.included) flags += ";excluded";
        body += r.experiment + "," + r.member + "," + num(r.p) + ",";
        if (r.included) {
            ++included;
            flags += ";refined_ratio=" + num(r.refined_ratio);
            body += num(r.lower_bound) + "," + num(r.proxy_norm) + "," + num(r.ratio);
        } else {
            body += ",,";
        }
        body += "," + flags + "\n";
    }
    const bool ok = res.ok();
    const std::string verdict = std::string("verdict,") + (ok ? "ok" : (res.all_finite ? "unstable" : "non-finite")) +
                                ",max_ratio=" + num(res.max_ratio) + ",included=" + std::to_string(included) +
                                ",excluded=" + std::to_string(res.rows.size() - included);
    body += "# " + verdict + "\n";
    os.add("probe-theorem.csv", body);
    announce(out, os.commit());
    out << verdict << "\n";
    return ok ? kOk : kInstability;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Jacobi transform and multiplier lab", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    CommonFlags flags;

    auto* eval = app.add_subcommand("eval", "evaluate phi, c, omega or the translation kernel at a point");
    EvalArgs ea;
    eval->add_option("what", ea.what)->required()->check(CLI::IsMember({"phi", "c", "omega", "kernel-K"}));
    eval->add_option("--lambda", ea.lambda);
    eval->add_option("--lambda-im", ea.lambda_im);
    eval->add_option("--t", ea.t);
    eval->add_option("--s", ea.s);
    eval->add_option("--u", ea.u);
    add_common(eval, flags);

    auto* transform = app.add_subcommand("transform", "Jacobi transform of t,re,im samples");
    std::string input;
    bool roundtrip = false;
    transform->add_option("--input", input)->required();
    transform->add_flag("--roundtrip", roundtrip, "also report inverse-transform and Plancherel defects");
    add_common(transform, flags);

    auto* inverse = app.add_subcommand("inverse", "inverse transform of lambda,re,im samples");
    inverse->add_option("--input", input)->required();
    add_common(inverse, flags);

    auto* conv = app.add_subcommand("convolve", "Jacobi convolution of two radial sample files");
    ConvArgs ca;
    conv->add_option("--f", ca.f)->required();
    conv->add_option("--g", ca.g)->required();
    conv->add_option("--conv-T-max", ca.T_max);
    conv->add_option("--conv-panels", ca.panels);
    conv->add_option("--conv-order", ca.order);
    conv->add_option("--budget", ca.budget, "maximum radial nodes for the double quadrature");
    add_common(conv, flags);

    auto* heat = app.add_subcommand("heat", "heat kernel h_s on the radial grid");
    double hs = kUnset;
    bool hspec = false;
    heat->add_option("--s", hs)->required();
    heat->add_flag("--spectral", hspec, "write the spectral multiplier instead");
    add_common(heat, flags);

    auto* grid = app.add_subcommand("grid", "write the radial or spectral quadrature grid");
    std::string which;
    grid->add_option("which", which)->required()->check(CLI::IsMember({"radial", "spectral"}));
    add_common(grid, flags);

    auto* report = app.add_subcommand("report", "diagnostic tables");
    ReportArgs ra;
    report->add_option("kind", ra.kind)
        ->required()
        ->check(CLI::IsMember({"c-asymptotics", "gangolli", "expansion-errors", "hormander-w"}));
    report->add_option("--lmin", ra.lmin);
    report->add_option("--lmax", ra.lmax);
    report->add_option("--n", ra.n);
    report->add_option("--kmax", ra.kmax);
    report->add_option("--fit-lo", ra.fit_lo, "lower end of the w slope fit");
    add_common(report, flags);

    auto* probe = app.add_subcommand("probe-theorem", "operator-norm / proxy ratios for a multiplier family");
    ProbeArgs pa;
    probe->add_option("--family", pa.family)->required();
    probe->add_option("--p", pa.p);
    probe->add_option("--trials", pa.trials);
    add_common(probe, flags);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, eo;
        const int code = app.exit(e, o, eo);
        out << o.str();
        err << eo.str();
        return code == 0 ? kOk : kBadInput;
    }

    try {
        const RunConfig cfg = resolve_config(flags);
        if (*eval) return cmd_eval(cfg, ea, out);
        if (*transform) return cmd_transform(cfg, flags, input, roundtrip, out);
        if (*inverse) return cmd_inverse(cfg, flags, input, out);
        if (*conv) return cmd_convolve(cfg, flags, ca, out);
        if (*heat) return cmd_heat(cfg, flags, hs, hspec, out);
        if (*grid) return cmd_grid(cfg, flags, which, out);
        if (*report) return cmd_report(cfg, flags, ra, out);
        if (*probe) return cmd_probe(cfg, flags, pa, out);
    } catch (const DecayError& e) {
        err << "error: " << e.what() << "\n";
        return kDecayFailure;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const BudgetError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInstability;
    }
    return kBadInput;
}

}  // namespace jacobi::cli
