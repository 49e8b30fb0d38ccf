// tauber: command-line driver for the rate algebra, catalog, counterexample,
// contour and semigroup modules.
//
// Exit codes: 0 all checks pass, 2 some check failed, 1 usage or validation error.
// Output directory: --out, else $TAUBER_OUT_DIR, else the working directory.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <tauber/contour_engine.hpp>
#include <tauber/counterexample.hpp>
#include <tauber/rate_catalog.hpp>
#include <tauber/rate_io.hpp>
#include <tauber/semigroup_lab.hpp>

using json = nlohmann::ordered_json;
using namespace tauber;
namespace fs = std::filesystem;

namespace {

constexpr const char* kReportSchema = "tauber.report/1";
constexpr const char* kCsvSchema = "tauber.csv/1";

struct Run {
    std::string out_dir;
    std::uint64_t seed = 0;
    json report;
    std::vector<std::string> failures;

    void check(const std::string& name, bool ok, const std::string& detail = "")
    {
        report["checks"].push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
        if (!ok) failures.push_back(name + (detail.empty() ? "" : ": " + detail));
    }
};

std::string num(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string label(double v)
{
    std::ostringstream os;
    os << v;
    return os.str();
}

class Csv {
public:
    Csv(Run& run, const std::string& name, const std::vector<std::string>& header) : path_(fs::path(run.out_dir) / name)
    {
        fs::create_directories(run.out_dir);
        os_.open(path_);
        if (!os_) throw std::runtime_error("cannot write " + path_.string());
        write(header);
        run.report["csv"].push_back({{"file", path_.string()}, {"schema", kCsvSchema}});
    }
    void row(const std::vector<double>& v)
    {
        std::vector<std::string> s;
        for (double x : v) s.push_back(num(x));
        write(s);
    }
    void write(const std::vector<std::string>& v)
    {
        for (std::size_t i = 0; i < v.size(); ++i) os_ << (i ? "," : "") << v[i];
        os_ << '\n';
    }

private:
    fs::path path_;
    std::ofstream os_;
};

json read_config(const std::string& path)
{
    std::ifstream is(path);
    if (!is) throw validation_error("cannot read config '" + path + "'");
    try {
        return json::parse(is);
    } catch (const json::parse_error& e) {
        throw validation_error(std::string("config: ") + e.what());
    }
}

template <class T>
T cfg(const json& j, const char* key, T dflt)
{
    return j.contains(key) ? j.at(key).get<T>() : dflt;
}

RateSpec cfg_rate(const json& j, const char* key, const std::string& dflt)
{
    return j.contains(key) ? rate_from_config(nlohmann::json::parse(j.at(key).dump())) : parse_rate(dflt);
}

json rate_json(const RateSpec& r) { return json::parse(to_json(r).dump()); }

std::vector<double> grid_from(const json& j, double lo, double hi, int n)
{
    if (j.is_array()) return j.get<std::vector<double>>();
    return log_grid(cfg(j, "min", lo), cfg(j, "max", hi), cfg(j, "n", n));
}

// ---- rate / invert -----------------------------------------------------------

void cmd_rate(Run& run, const std::string& Ms, const std::string& Ks, int m, double t)
{
    RateSpec M = parse_rate(Ms), K = parse_rate(Ks);
    PositiveIncreaseWitness w = positive_increase_estimate(K, log_grid(1, 1e8, 64));
    const bool with_log = !(w.a > 0);
    RateSpec F = m_sub_k(M, k_m_transform(K, m, with_log));
    double ls = value(F, 1.0) <= t ? right_inverse_log(F, t) : std::log(inverse(F, t));
    run.report["M"] = rate_json(M);
    run.report["K"] = rate_json(K);
    run.report["K_tilde"] = with_log ? "K_m,log" : "K_m";
    run.report["positive_increase_index"] = w.a;
    run.report["t"] = t;
    run.report["log_inverse"] = ls;
    run.report["inverse"] = std::exp(ls);
    // values beyond double range are printed in exponential form
    std::cout << (std::isfinite(std::exp(ls)) ? num(std::exp(ls)) : "exp(" + num(ls) + ")") << '\n';
}

void cmd_invert(Run& run, const std::string& Fs, double t)
{
    RateSpec F = parse_rate(Fs);
    InverseResult r = right_inverse(F, t);
    run.report["F"] = rate_json(F);
    run.report["t"] = t;
    run.report["inverse"] = r.s;
    run.check("round_trip", std::abs(value(F, r.s) - t) <= 1e-5 * std::max(1.0, t) || value(F, r.s) < t,
              "F(F^-1(t)) = " + num(value(F, r.s)));
    std::cout << num(r.s) << '\n';
}

// ---- catalog -------------------------------------------------------------------

void cmd_catalog(Run& run, CatalogCase cs, double tmin, double tmax, int n)
{
    auto rep = verify_catalog_asymptotics(cs, log_grid(tmin, tmax, n));
    run.report["case"] = std::string(1, cs.id);
    run.report["fitted_slope"] = rep.fitted_slope;
    run.report["expected_slope"] = rep.expected_slope;
    run.report["ratio_min"] = rep.ratio_min;
    run.report["ratio_max"] = rep.ratio_max;
    Csv csv(run, std::string("catalog_") + cs.id + ".csv",
            {"t[time]", "closed_form_R[freq]", "generic_inverse_R[freq]", "ratio[1]", "local_slope[1]"});
    for (const auto& r : rep.rows) csv.row({r.t, r.closed_form, r.generic_inverse, r.ratio, r.slope_window});
    for (const auto& c : rep.checks) run.check(c.name, c.passed, "margin " + num(c.worst_margin) + (c.note.empty() ? "" : "; " + c.note));
}

// ---- counterexample ------------------------------------------------------------

void cmd_counterexample(Run& run, const json& c)
{
    RateSpec M = cfg_rate(c, "M", "const:1"), K = cfg_rate(c, "K", "pow1:2");
    const double c1 = cfg(c, "c1", 1.5), eps0 = cfg(c, "eps0", 0.5);
    const int terms = cfg(c, "terms", 6), grid = cfg(c, "grid_points", 10000);
    CounterexampleFunction f = assemble_f(M, K, c1, eps0, terms);
    OptimalityReport rep = verify_optimality(f, c1, default_omega_grid(f, grid), Probe{M, 0.0});
    run.report["delta"] = f.delta;
    run.report["gamma"] = f.gamma;
    run.report["alpha"] = f.fit.alpha;
    run.report["beta"] = f.fit.beta;
    run.report["c_alpha_beta"] = f.fit.c;
    run.report["C_hat"] = rep.C_hat;
    run.report["c_min"] = rep.c_min;
    run.report["c_mean"] = rep.c_mean;
    run.report["spread"] = rep.spread;
    Csv rows(run, "counterexample_terms.csv",
             {"n[1]", "k[1]", "t_n[time]", "log_R_n[ln freq]", "log_abs_f[ln]", "lower_value[1]", "chain_lower[1]"});
    for (const auto& r : rep.rows) rows.row({double(r.n), double(r.k), r.t, r.log_R, r.log_abs_f, r.value, r.chain_lower});
    Csv probe(run, "counterexample_probe.csv", {"n[1]", "log_R_n[ln freq]", "log_abs_zf[ln]", "log_bound[ln]", "ratio[1]"});
    for (const auto& r : rep.probe_rows) probe.row({double(r.n), r.log_R, r.log_abs_zf, r.log_bound, r.ratio});
    for (const auto& ch : rep.checks) run.check(ch.name, ch.passed, "margin " + num(ch.worst_margin) + (ch.note.empty() ? "" : "; " + ch.note));
}

// ---- contour -------------------------------------------------------------------

TestCase contour_testcase(const json& c)
{
    const std::string id = cfg<std::string>(c, "testcase", "exp");
    if (id == "exp") return testcase_exp();
    if (id == "log_singular") return testcase_log_singular();
    if (id == "measure") {
        auto p = make_lemma_params(cfg(c, "mu_delta", 1.0), cfg(c, "mu_k", 6), 1, std::log(cfg(c, "mu_R", 5.0)));
        return testcase_measure(p);
    }
    throw validation_error("contour: unknown testcase '" + id + "'");
}

void cmd_contour(Run& run, const json& c)
{
    const std::string mode = cfg<std::string>(c, "mode", "reconstruct");
    run.report["mode"] = mode;
    if (mode == "fudge_lemma") {
        auto rep = verify_fudge_lemma(cfg(c, "k", 6), cfg(c, "eps", 0.5), log_grid(cfg(c, "y_min", 1e-3), cfg(c, "y_max", 0.9), cfg(c, "n", 200)));
        run.report["log_C_sign"] = rep.log_C.sign;
        run.report["log_log_C"] = rep.log_C.lg;
        run.report["argmax_y"] = rep.argmax_y;
        Csv csv(run, "fudge_lemma.csv", {"y[1]", "x[1]", "log_abs_psi[ln]", "measured_sign[1]", "measured_loglog[ln ln]"});
        for (const auto& r : rep.rows) csv.row({r.y, r.x, r.log_modulus, double(r.measured.sign), r.measured.lg});
        run.check("finite", rep.finite);
        run.check("away_from_pole", rep.away_from_pole, "argmax y = " + num(rep.argmax_y));
        run.check("tail_decreasing", rep.tail_decreasing);
        return;
    }
    TestCase tc = contour_testcase(c);
    RateSpec M = cfg_rate(c, "M", "const:2");
    if (mode == "taylor") {
        require(tc.sing.has_value(), "contour: taylor mode needs a log-singular testcase");
        LogSingularity s{*tc.sing, tc.sing_r, tc.sing_sup};
        Csv csv(run, "taylor.csv", {"t[time]", "f[1]", "correction[1]", "residual[1]"});
        double worst = 0;
        for (double t : grid_from(c.value("t_grid", json::object()), 0.5, 50, 40)) {
            cplx corr = taylor_correction(s, static_cast<int>(s.a.size()), t), fv = tc.f(t);
            csv.row({t, fv.real(), corr.real(), (fv + corr).real()});
            if (tc.name == "log_singular") worst = std::max(worst, std::abs((fv + corr).real() + std::exp(-t) / t));
        }
        HypothesisProfile prof;
        auto dec = decay_estimate_check(tc, M, cfg_rate(c, "K", "const:2"), prof, log_grid(1, 200, 60));
        run.report["decay_log_C"] = dec.log_C;
        run.check("closed_form_residual", worst <= 1e-12, "max deviation " + num(worst));
        run.check("decay_envelope_finite", dec.passed());
        return;
    }
    require(mode == "reconstruct", "contour: mode must be reconstruct, taylor or fudge_lemma");
    const double t = cfg(c, "t", 5.0), R = cfg(c, "R", 20.0), tol = cfg(c, "quad_tol", 1e-7);
    const int k = cfg(c, "k", 1);
    std::vector<ContourNode> trace;
    Reconstruction r = reconstruct(tc, t, R, M, k, tol, cfg(c, "r1", 1.0), &trace);
    cplx ref = tc.f(t);
    run.report["testcase"] = tc.name;
    run.report["t"] = t, run.report["R"] = R, run.report["k"] = k;
    run.report["value"] = {r.value.real(), r.value.imag()};
    run.report["I1"] = {r.I1.real(), r.I1.imag()};
    run.report["I2"] = {r.I2.real(), r.I2.imag()};
    run.report["I3"] = {r.I3.real(), r.I3.imag()};
    run.report["reference"] = {ref.real(), ref.imag()};
    run.report["cancellation_digits"] = r.cancellation_digits;
    run.report["max_log_psi"] = r.max_log_psi;
    Csv csv(run, "contour_nodes.csv", {"path", "param[1]", "re_z[freq]", "im_z[freq]", "log_abs_psi[ln]", "abs_integrand[1]"});
    for (const auto& n : trace)
        csv.write({n.path, num(n.param), num(n.z.real()), num(n.z.imag()), num(n.log_psi), num(n.integrand_abs)});
    run.check("reconstruction_identity", std::abs(r.value - ref) <= std::max(2 * tol, 1e-5 * std::abs(ref)),
              "error " + num(std::abs(r.value - ref)));
}

// ---- semigroup -----------------------------------------------------------------

void cmd_semigroup(Run& run, const json& c)
{
    SpectrumModel model = preset(cfg<std::string>(c, "preset", "normal_line"), cfg(c, "param", 1.0));
    const int m = cfg(c, "m", 1);
    std::vector<double> cs = c.contains("c") ? c.at("c").get<std::vector<double>>() : std::vector<double>{0.5, 0.9, 1.0, 1.5};
    auto ts = grid_from(c.value("t_grid", json::object()), 1, 1e4, 61);
    DecayReport rep = corollary_check(model, m, cs, ts);
    run.report["model"] = model.name;
    run.report["qualitative"] = model.qualitative;
    run.report["m"] = m;
    run.report["c_star"] = rep.c_star;
    for (const auto& v : rep.verdicts)
        run.report["verdicts"].push_back({{"c", v.c}, {"bounded", v.bounded}, {"log_sup_ratio", v.log_sup_ratio}, {"argmax_t", v.argmax_t}});
    std::vector<std::string> header{"t[time]", "log_orbit_norm[ln]"};
    for (double cv : rep.c_grid) header.push_back("log_predicted_c" + label(cv) + "[ln]"), header.push_back("log_ratio_c" + label(cv) + "[ln]");
    Csv csv(run, "semigroup_" + model.name + ".csv", header);
    for (const auto& r : rep.rows) {
        std::vector<double> v{r.t, r.log_orbit};
        for (std::size_t j = 0; j < r.log_ratio.size(); ++j) v.push_back(r.log_predicted[j]), v.push_back(r.log_ratio[j]);
        csv.row(v);
    }
    if (model.kind != SpectrumKind::jordan) run.check("monotone_decay", rep.monotone);
    for (const auto& v : rep.verdicts)
        if (v.c <= 0.9) run.check("bounded_c" + label(v.c), v.bounded);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tauber: decay rates from resolvent growth"};
    app.require_subcommand(1);
    Run run;
    const char* env = std::getenv("TAUBER_OUT_DIR");
    run.out_dir = env ? env : ".";
    app.add_option("--out", run.out_dir, "output directory (default $TAUBER_OUT_DIR or .)");
    app.add_option("--seed", run.seed, "seed recorded in the report; all grids are deterministic");

    std::string Ms = "const:1", Ks = "pow1:2", Fs;
    int m = 1;
    double t = 0;
    auto* rate_cmd = app.add_subcommand("rate", "print M_K~^{-1}(t)");
    rate_cmd->add_option("--M", Ms, "resolvent bound M");
    rate_cmd->add_option("--K", Ks, "transform growth K");
    rate_cmd->add_option("--m", m, "derivative order");
    rate_cmd->add_option("--t", t, "time")->required();

    auto* inv_cmd = app.add_subcommand("invert", "print F^{-1}(t)");
    inv_cmd->add_option("--F", Fs, "rate F")->required();
    inv_cmd->add_option("--t", t, "value")->required();

    CatalogCase cs;
    std::string case_id = "e";
    double tmin = 1e4, tmax = 1e8;
    int n = 41;
    auto* cat_cmd = app.add_subcommand("catalog", "verify a catalog case");
    cat_cmd->add_option("--case", case_id, "case id a..j");
    cat_cmd->add_option("--alpha", cs.alpha);
    cat_cmd->add_option("--alpha-prime", cs.alpha_p);
    cat_cmd->add_option("--beta", cs.beta);
    cat_cmd->add_option("--gamma", cs.gamma);
    cat_cmd->add_option("--delta", cs.delta);
    cat_cmd->add_option("--delta-prime", cs.delta_p);
    cat_cmd->add_option("--C", cs.C);
    auto* tmin_opt = cat_cmd->add_option("--tmin", tmin, "default depends on the case");
    auto* tmax_opt = cat_cmd->add_option("--tmax", tmax);
    cat_cmd->add_option("--n", n);

    std::string config;
    auto* ce_cmd = app.add_subcommand("counterexample", "assemble and verify the optimality counterexample");
    ce_cmd->add_option("--config", config, "JSON config {M, K, c1, eps0, terms, grid_points}");
    auto* ct_cmd = app.add_subcommand("contour", "contour reconstruction, Taylor correction, fudge lemma");
    ct_cmd->add_option("--config", config, "JSON config {mode, testcase, t, R, k, M, quad_tol, ...}");
    auto* sg_cmd = app.add_subcommand("semigroup", "orbit decay versus the corollary envelope");
    sg_cmd->add_option("--config", config, "JSON config {preset, param, m, c, t_grid}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::string sub = app.get_subcommands().front()->get_name();
    run.report["schema"] = kReportSchema;
    run.report["subcommand"] = sub;
    run.report["seed"] = run.seed;
    run.report["checks"] = json::array();
    run.report["csv"] = json::array();
    try {
        json c = config.empty() ? json::object() : read_config(config);
        if (sub == "rate") cmd_rate(run, Ms, Ks, m, t);
        else if (sub == "invert") cmd_invert(run, Fs, t);
        else if (sub == "catalog") {
            require(case_id.size() == 1, "catalog: case must be a single letter");
            cs.id = case_id[0];
            // (a) inverts an exponential, so R leaves double range early
            if (cs.id == 'a') tmin = tmin_opt->count() ? tmin : 10, tmax = tmax_opt->count() ? tmax : 2e4;
            else if (cs.id >= 'b' && cs.id <= 'd' && !tmax_opt->count()) tmax = 1e7;
            cmd_catalog(run, cs, tmin, tmax, n);
        } else if (sub == "counterexample") cmd_counterexample(run, c);
        else if (sub == "contour") cmd_contour(run, c);
        else cmd_semigroup(run, c);
    } catch (const threshold_error& e) {
        std::cerr << "error: " << e.what() << " (c_alpha_beta = " << num(e.c_ab) << ")\n";
        return 1;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    run.report["passed"] = run.failures.empty();
    const std::string text = run.report.dump(2);
    if (sub != "rate" && sub != "invert") {
        fs::create_directories(run.out_dir);
        std::ofstream(fs::path(run.out_dir) / (sub + "_report.json")) << text << '\n';
        std::cout << text << '\n';
    }
    for (const auto& f : run.failures) std::cerr << "check failed: " << f << '\n';
    return run.failures.empty() ? 0 : 2;
}
