#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "fracpar/acceptance.hpp"
#include "fracpar/config.hpp"
#include "fracpar/extension.hpp"
#include "fracpar/fracop.hpp"
#include "fracpar/harness.hpp"
#include "fracpar/io.hpp"
#include "fracpar/specfun.hpp"
#include "fracpar/transference.hpp"

using namespace fracpar;
using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("short write to '" + path + "'");
}

void write_json_file(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// specfun-selftest

int run_specfun_selftest(const std::string& out_path) {
    using namespace fracpar::specfun;
    std::FILE* out = out_path.empty() ? stdout : std::fopen(out_path.c_str(), "w");
    if (!out) {
        std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
        return 1;
    }
    std::fprintf(out, "s,y,re_lam,im_lam,check_name,residual\n");

    const std::vector<double> svals = {0.1, 0.25, 0.5, 0.75, 0.9};
    std::vector<double> yvals;
    for (int i = 0; i < 12; ++i)
        yvals.push_back(1e-3 * std::pow(50.0 / 1e-3, i / 11.0));
    std::vector<Complex> lams;
    for (double lr : {0.1, 1.0, 10.0})
        for (double rho : {-20.0, -1.0, 0.0, 1.0, 20.0}) lams.emplace_back(lr, rho);

    bool ok = true;
    auto emit = [&](double s, double y, Complex lam, const char* name, double resid,
                    double tol) {
        std::fprintf(out, "%.4g,%.6g,%.6g,%.6g,%s,%.3e\n", s, y, lam.real(), lam.imag(),
                     name, resid);
        if (!(resid < tol)) ok = false;
    };

    for (double s : svals) {
        FracOrder fs(s);
        for (double y : yvals)
            for (Complex lam : lams) {
                const Complex a = i_s(y, lam, fs, IsRepresentation::bessel);
                const Complex b = i_s(y, lam, fs, IsRepresentation::laplace_in_t);
                const Complex c = i_s(y, lam, fs, IsRepresentation::laplace_in_r);
                const Complex d = i_s(y, lam, fs, IsRepresentation::multiplier);
                const double scale = std::max({std::abs(a), std::abs(b), std::abs(c),
                                               std::abs(d), 1e-280});
                const double spread =
                    std::max({std::abs(a - b), std::abs(a - c), std::abs(a - d)}) / scale;
                emit(s, y, lam, "representation_spread", spread, 1e-8);
                emit(s, y, lam, "modulus_bound", std::max(0.0, std::abs(a) - 1.0), 1e-12);
            }
        for (double y : {1e-3, 0.1, 1.0, 10.0, 50.0})
            emit(s, y, Complex(0.0), "normalization", normalization_residual(y, fs), 1e-10);
    }

    if (out != stdout) std::fclose(out);
    std::fprintf(stderr, "specfun-selftest: %s\n", ok ? "all checks passed" : "FAILURES");
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// make-field: generate a sample field file for the apply/extend pipelines

int run_make_field(const std::string& op_name, int K, int N, int M, double T,
                   const std::string& kind, unsigned seed, const std::string& out) {
    OperatorSpec spec;
    spec.kind = kind_from_name(op_name);
    auto es = std::make_shared<const EigenSystem>(build_eigensystem(spec, K, N));
    TimeGrid tg(M, T);
    std::mt19937 rng(seed);
    SpaceTimeField u(tg, es);
    if (kind == "random") {
        u = random_band_limited_field(tg, es, rng);
    } else if (kind == "mode") {
        SpectralField c(tg, es);
        c.coef(tg.origin_index() + 1, 0) = 1.0;
        c.coef(tg.origin_index() - 1, 0) = 1.0;
        u = synthesize(c);
    } else {
        throw std::runtime_error("make-field: unknown kind '" + kind +
                                 "' (expected random|mode)");
    }
    io::write_field(out, u);
    std::printf("wrote %s.bin / %s.json (M=%d, N=%d)\n", out.c_str(), out.c_str(), tg.M,
                es->grid_size());
    return 0;
}

// ---------------------------------------------------------------------------
// apply

int run_apply(const std::string& op_name, double s, const std::string& route,
              const std::string& in, const std::string& out) {
    SpaceTimeField u = io::read_field(in);
    if (!op_name.empty() &&
        kind_from_name(op_name) != u.space->spec.kind)
        throw std::runtime_error("apply: --op '" + op_name +
                                 "' disagrees with the field manifest ('" +
                                 std::string(kind_name(u.space->spec.kind)) + "')");
    const FracOrder fs(s);
    SpaceTimeField result(u.time, u.space);
    double err = 0.0;
    if (route == "multiplier") {
        result = apply_fractional(u, fs);
    } else if (route == "semigroup") {
        RouteResult r = fractional_via_semigroup(analyze(u), fs);
        result = synthesize(r.value);
        err = r.error_estimate;
    } else if (route == "master") {
        MasterApplyResult r = fractional_via_master(u, fs);
        result = r.value;
        err = r.error_estimate;
    } else {
        throw std::runtime_error("apply: unknown route '" + route +
                                 "' (expected multiplier|semigroup|master)");
    }
    io::write_field(out, result);
    std::printf("applied H^%g via %s route; max |out| = %.6e", s, route.c_str(),
                result.values.cwiseAbs().maxCoeff());
    if (route != "multiplier") std::printf(", quadrature error estimate %.3e", err);
    std::printf("\n");
    return 0;
}

// ---------------------------------------------------------------------------
// extension file format: FPES-style blob (M, K) with base + per-level
// coefficient matrices stored re/im, plus a JSON sidecar.

void write_extension(const std::string& base, const ExtensionField& ext) {
    const int M = ext.time.M;
    const int K = ext.space->modes();
    std::ofstream out(base + ".bin", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + base + ".bin'");
    const char magic[4] = {'F', 'P', 'E', 'S'};
    out.write(magic, 4);
    auto put_u32 = [&](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), 4);
    };
    put_u32(1u);
    put_u32(static_cast<std::uint32_t>(M));
    put_u32(static_cast<std::uint32_t>(K));
    auto put_mat = [&](const Eigen::MatrixXcd& m) {
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                const double re = m(i, j).real(), im = m(i, j).imag();
                out.write(reinterpret_cast<const char*>(&re), 8);
                out.write(reinterpret_cast<const char*>(&im), 8);
            }
    };
    put_mat(ext.base);
    for (const auto& lvl : ext.levels) put_mat(lvl);
    if (!out) throw std::runtime_error("short write to '" + base + ".bin'");

    json j = {{"schema", "fracpar-extension/1"},
              {"time", {{"M", ext.time.M}, {"T", ext.time.T}}},
              {"operator",
               {{"kind", kind_name(ext.space->spec.kind)},
                {"alpha", ext.space->spec.alpha},
                {"lambda_param", ext.space->spec.lambda_param},
                {"x_lo", ext.space->spec.x_lo},
                {"x_hi", ext.space->spec.x_hi},
                {"K", ext.space->modes()},
                {"N", ext.space->grid_size()}}},
              {"s", ext.s.value()},
              {"y", std::vector<double>(ext.y.data(), ext.y.data() + ext.y.size())}};
    write_json_file(base + ".json", j);
}

ExtensionField read_extension(const std::string& base) {
    std::ifstream jin(base + ".json");
    if (!jin) throw std::runtime_error("cannot open '" + base + ".json'");
    const json j = json::parse(jin);
    if (j.value("schema", "") != "fracpar-extension/1")
        throw std::runtime_error("'" + base + ".json' is not an extension manifest");
    const json& op = j.at("operator");
    OperatorSpec spec;
    spec.kind = kind_from_name(op.at("kind").get<std::string>());
    spec.alpha = op.at("alpha").get<double>();
    spec.lambda_param = op.at("lambda_param").get<double>();
    spec.x_lo = op.at("x_lo").get<double>();
    spec.x_hi = op.at("x_hi").get<double>();
    auto es = std::make_shared<const EigenSystem>(
        build_eigensystem(spec, op.at("K").get<int>(), op.at("N").get<int>()));
    TimeGrid tg(j.at("time").at("M").get<int>(), j.at("time").at("T").get<double>());

    ExtensionField ext(tg, es, FracOrder(j.at("s").get<double>()));
    const auto yv = j.at("y").get<std::vector<double>>();
    ext.y = Eigen::Map<const Eigen::VectorXd>(yv.data(), yv.size());

    std::ifstream in(base + ".bin", std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + base + ".bin'");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "FPES", 4) != 0)
        throw std::runtime_error("bad magic in '" + base + ".bin'");
    std::uint32_t version = 0, d0 = 0, d1 = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&d0), 4);
    in.read(reinterpret_cast<char*>(&d1), 4);
    if (!in || version != 1u || static_cast<int>(d0) != tg.M ||
        static_cast<int>(d1) != es->modes())
        throw std::runtime_error("extension blob disagrees with '" + base + ".json'");
    auto get_mat = [&]() {
        Eigen::MatrixXcd m(tg.M, es->modes());
        for (int i = 0; i < m.rows(); ++i)
            for (int jj = 0; jj < m.cols(); ++jj) {
                double re, im;
                in.read(reinterpret_cast<char*>(&re), 8);
                in.read(reinterpret_cast<char*>(&im), 8);
                m(i, jj) = Complex(re, im);
            }
        if (!in) throw std::runtime_error("truncated extension payload");
        return m;
    };
    ext.base = get_mat();
    for (Eigen::Index l = 0; l < ext.y.size(); ++l) ext.levels.push_back(get_mat());
    return ext;
}

int run_extend(double s, const std::string& op_name, const std::string& in,
               const std::string& ygrid_arg, const std::string& out) {
    SpaceTimeField u = io::read_field(in);
    if (!op_name.empty() && kind_from_name(op_name) != u.space->spec.kind)
        throw std::runtime_error("extend: --op disagrees with the field manifest");
    YGrid grid;
    if (!ygrid_arg.empty()) {
        double ymin, g, L;
        if (std::sscanf(ygrid_arg.c_str(), "%lf,%lf,%lf", &ymin, &g, &L) != 3)
            throw std::runtime_error("extend: --ygrid expects 'ymin,growth,ymax'");
        grid.y_min = ymin;
        grid.growth = g;
        grid.y_max = L;
    }
    grid.validate();
    ExtensionField ext = extend(analyze(u), FracOrder(s), grid);
    write_extension(out, ext);
    std::printf("extension with %d y-levels on [%g, %g] written to %s.{bin,json}\n",
                static_cast<int>(ext.y.size()), grid.y_min, grid.y_max, out.c_str());
    return 0;
}

// ---------------------------------------------------------------------------
// trace-check

int run_trace_check(const std::string& ext_path, const std::string& report_path) {
    const ExtensionField ext = read_extension(ext_path);
    const double sv = ext.s.value();
    const double cn_exact = specfun::neumann_trace_constant(ext.s);
    const double cq_exact = specfun::quotient_trace_constant(ext.s);

    const SpectralField nt = neumann_trace(ext);
    const SpectralField qt = quotient_trace(ext);
    const double cmax = ext.base.cwiseAbs().maxCoeff();

    double worst_n = 0.0, worst_q = 0.0;
    int modes_checked = 0;
    for (int m = 0; m < ext.time.M; ++m)
        for (int k = 0; k < ext.space->modes(); ++k) {
            const Complex c = ext.base(m, k);
            if (std::abs(c) <= 1e-9 * std::max(cmax, 1e-300)) continue;
            const Complex sym(ext.space->lambda(k), ext.time.rho(m));
            if (std::abs(sym) <= 1e-12) continue;
            const Complex syms = std::pow(sym, sv);
            ++modes_checked;
            worst_n = std::max(worst_n,
                               std::abs(nt.coef(m, k) / (syms * c) - cn_exact) /
                                   std::abs(cn_exact));
            worst_q = std::max(worst_q,
                               std::abs(qt.coef(m, k) / (syms * c) - cq_exact) /
                                   std::abs(cq_exact));
        }

    const PdeResidual pr = pde_residual(ext);
    const double energy = energy_norm(ext);

    const bool pass = modes_checked > 0 && worst_n < 1e-6 && worst_q < 1e-6 &&
                      pr.max_scaled < 1e-8 && std::isfinite(energy);
    json rep = {{"schema", "fracpar-trace-check/1"},
                {"s", sv},
                {"modes_checked", modes_checked},
                {"neumann_constant",
                 {{"exact", cn_exact}, {"max_rel_dev", worst_n}, {"tol", 1e-6}}},
                {"quotient_constant",
                 {{"exact", cq_exact}, {"max_rel_dev", worst_q}, {"tol", 1e-6}}},
                {"pde_residual",
                 {{"exact_route_max_scaled", pr.max_scaled},
                  {"finite_difference_max_scaled", pr.fd_max_scaled},
                  {"tol", 1e-8}}},
                {"energy_norm", energy},
                {"passed", pass}};
    if (!report_path.empty()) write_json_file(report_path, rep);
    std::printf("trace-check: %s (neumann dev %.3e, quotient dev %.3e, pde %.3e, "
                "%d modes)\n",
                pass ? "PASS" : "FAIL", worst_n, worst_q, pr.max_scaled, modes_checked);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// transfer-check

int run_transfer_check(const std::string& pair, double s, int trials,
                       const std::string& report_path, unsigned seed) {
    const auto maps = builtin_maps();
    const TransferMap& map = find_map(maps, pair);
    const int N = map.source.kind == OperatorKind::hermite_shifted ? 400 : 256;
    auto src = std::make_shared<const EigenSystem>(build_eigensystem(map.source, 8, N));
    TimeGrid tg(16, 4.0);
    std::mt19937 rng(seed);
    double worst = 0.0;
    std::vector<double> per_trial;
    for (int t = 0; t < trials; ++t) {
        const double dev = verify_intertwine(src, map, FracOrder(s), tg, rng);
        per_trial.push_back(dev);
        worst = std::max(worst, dev);
    }
    const bool pass = worst < 1e-9;
    json rep = {{"schema", "fracpar-transfer-check/1"},
                {"pair", map.name},
                {"target", map.target_note},
                {"s", s},
                {"trials", trials},
                {"seed", seed},
                {"intertwine_max_rel_dev", worst},
                {"per_trial", per_trial},
                {"tol", 1e-9},
                {"passed", pass}};
    if (!report_path.empty()) write_json_file(report_path, rep);
    std::printf("transfer-check %s: %s (max intertwining deviation %.3e over %d "
                "trials, tol 1e-9)\n",
                map.name.c_str(), pass ? "PASS" : "FAIL", worst, trials);
    return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// config-driven ensembles

void append_harnack_rows(std::string& csv, const std::string& experiment, unsigned seed,
                         double s, const std::string& op,
                         const std::vector<HarnackReport>& trials) {
    char buf[512];
    for (size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        std::snprintf(buf, sizeof buf,
                      "%s,%zu,%u,%.12e,%s,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                      experiment.c_str(), i, seed, s, op.c_str(), t.ratio,
                      t.min_interior, t.holder_alpha, t.holder_seminorm, t.residual);
        csv += buf;
    }
}

void append_boundary_rows(std::string& csv, const std::string& experiment, unsigned seed,
                          double s, const std::string& op,
                          const std::vector<BoundaryReport>& trials) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    char buf[512];
    for (size_t i = 0; i < trials.size(); ++i) {
        const auto& t = trials[i];
        std::snprintf(buf, sizeof buf,
                      "%s,%zu,%u,%.12e,%s,%.12e,%.12e,%.12e,%.12e,%.12e\n",
                      experiment.c_str(), i, seed, s, op.c_str(), t.ratio, nan, nan,
                      nan, t.residual);
        csv += buf;
    }
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

OperatorSpec operator_from_config(const Config& cfg) {
    OperatorSpec spec;
    spec.kind = kind_from_name(cfg.get("operator", "kind"));
    spec.alpha = cfg.get_num_or("operator", "alpha", spec.alpha);
    spec.lambda_param = cfg.get_num_or("operator", "lambda", spec.lambda_param);
    spec.x_lo = cfg.get_num_or("operator", "x_lo", 0.0);
    spec.x_hi = cfg.get_num_or("operator", "x_hi", 0.0);
    return spec;
}

// Shared driver for `harnack --config` and `boundary-harnack --config`. The
// config declares which experiments to run ([ensemble] experiments, default =
// the subcommand's own kind; an explicitly empty list runs nothing and exits
// 0); operator/grids/s-values/geometry/tolerances/seed parametrize the runs.
int run_config_driver(const std::string& config_path, const std::string& out_dir,
                      const std::string& default_experiment) {
    Config cfg;
    try {
        cfg = Config::parse_file(config_path);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    try {
        std::filesystem::create_directories(out_dir);
        std::vector<std::string> experiments;
        if (cfg.has("ensemble", "experiments"))
            experiments = split_words(cfg.get("ensemble", "experiments"));
        else
            experiments.push_back(default_experiment);
        for (const auto& e : experiments)
            if (e != "interior" && e != "boundary")
                throw std::invalid_argument("config " + config_path +
                                            ": key 'experiments' in [ensemble] has "
                                            "unknown experiment '" +
                                            e + "' (expected interior|boundary)");

        json manifest = {{"schema", "fracpar-run/1"},
                         {"config", config_path},
                         {"experiments", json::array()}};
        std::string csv =
            "experiment,trial,seed,s,operator,ratio,min_interior,alpha_fit,seminorm,"
            "residual\n";

        if (experiments.empty()) {
            write_json_file(out_dir + "/manifest.json", manifest);
            write_text(out_dir + "/results.csv", csv);
            std::printf("empty experiment list; nothing to run\n");
            return 0;
        }

        const OperatorSpec op = operator_from_config(cfg);
        const int K = static_cast<int>(cfg.get_int_or("grids", "K", 16));
        const int N = static_cast<int>(cfg.get_int_or("grids", "N", 64));
        const int M = static_cast<int>(cfg.get_int_or("grids", "M", 32));
        const double T = cfg.get_num_or("grids", "T", 4.0);
        const bool refine = cfg.get_int_or("grids", "refine", 1) != 0;
        std::vector<double> svals = {0.5};
        if (cfg.has("s-values", "list")) svals = cfg.get_list("s-values", "list");
        const int trials = static_cast<int>(cfg.get_int_or("ensemble", "trials", 100));
        const unsigned seed =
            static_cast<unsigned>(cfg.get_int_or("seed", "value", 1));
        const double band_tol = cfg.get_num_or("tolerances", "band", 2.0);
        const double residual_tol = cfg.get_num_or("tolerances", "residual", 1e-9);

        bool pass = true;
        auto check_band = [&](double base, double refined, json& entry) {
            if (!(base > 0.0) || !(refined > 0.0)) {
                pass = false;
                entry["band"] = nullptr;
                return;
            }
            const double band = std::max(base / refined, refined / base);
            entry["band"] = band;
            if (band >= band_tol) pass = false;
        };

        for (const std::string& exp : experiments) {
            for (double s : svals) {
                char name[64];
                std::snprintf(name, sizeof name, "%s_s%.2f", exp.c_str(), s);
                json entry = {{"experiment", exp},
                              {"operator", kind_name(op.kind)},
                              {"s", s},
                              {"trials", trials},
                              {"seed", seed}};
                if (exp == "interior") {
                    EnsembleConfig ec;
                    ec.op = op;
                    ec.K = K;
                    ec.N = N;
                    ec.M = M;
                    ec.T = T;
                    ec.s = s;
                    ec.center = cfg.get_num("geometry", "center");
                    ec.r = cfg.get_num("geometry", "r");
                    ec.trials = trials;
                    ec.seed = seed;
                    const EnsembleSummary base = harnack_experiment(ec);
                    append_harnack_rows(csv, std::string(name) + "_base", seed, s,
                                        kind_name(op.kind), base.trials);
                    entry["base"] = {{"K", K},     {"N", N},
                                     {"M", M},     {"max_ratio", base.max_ratio},
                                     {"finite", base.finite_trials},
                                     {"smooth_violations", base.smooth_violation_trials},
                                     {"max_residual", base.max_residual}};
                    if (base.smooth_violation_trials > 0) pass = false;
                    if (base.max_residual > residual_tol) pass = false;
                    if (refine) {
                        EnsembleConfig fc = ec;
                        fc.K = 2 * K;
                        fc.N = 2 * N;
                        fc.M = 2 * M;
                        const EnsembleSummary fine = harnack_experiment(fc);
                        append_harnack_rows(csv, std::string(name) + "_refined", seed,
                                            s, kind_name(op.kind), fine.trials);
                        entry["refined"] = {{"K", fc.K}, {"N", fc.N}, {"M", fc.M},
                                            {"max_ratio", fine.max_ratio},
                                            {"max_residual", fine.max_residual}};
                        if (fine.max_residual > residual_tol) pass = false;
                        check_band(base.max_ratio, fine.max_ratio, entry);
                    }
                } else {  // boundary
                    BoundaryConfig bc;
                    bc.op = op;
                    bc.K = K;
                    bc.N = N;
                    bc.M = M;
                    bc.T = T;
                    bc.s = s;
                    bc.x_tilde = cfg.get_num("geometry", "x_tilde");
                    bc.r = cfg.get_num("geometry", "r");
                    bc.t0 = cfg.get_num_or("geometry", "t0", 1.5);
                    bc.trials = trials;
                    bc.seed = seed;
                    const BoundarySummary base = boundary_harnack_experiment(bc);
                    append_boundary_rows(csv, std::string(name) + "_base", seed, s,
                                         kind_name(op.kind), base.trials);
                    json trend = json::array();
                    for (const auto& [t0, r] : base.t0_trend)
                        trend.push_back({{"t0", t0}, {"max_ratio", r}});
                    entry["base"] = {{"K", K},     {"N", N},
                                     {"M", M},     {"max_ratio", base.max_ratio},
                                     {"finite", base.finite_trials},
                                     {"max_residual", base.max_residual}};
                    entry["t0_trend"] = trend;
                    if (base.max_residual > residual_tol) pass = false;
                    if (refine) {
                        BoundaryConfig fc = bc;
                        fc.K = 2 * K;
                        fc.N = 2 * N;
                        fc.data_K = K;
                        const BoundarySummary fine = boundary_harnack_experiment(fc);
                        append_boundary_rows(csv, std::string(name) + "_refined", seed,
                                             s, kind_name(op.kind), fine.trials);
                        entry["refined"] = {{"K", fc.K}, {"N", fc.N}, {"M", fc.M},
                                            {"max_ratio", fine.max_ratio},
                                            {"max_residual", fine.max_residual}};
                        if (fine.max_residual > residual_tol) pass = false;
                        check_band(base.max_ratio, fine.max_ratio, entry);
                    }
                }
                manifest["experiments"].push_back(entry);
            }
        }
        manifest["passed"] = pass;
        write_json_file(out_dir + "/manifest.json", manifest);
        write_text(out_dir + "/results.csv", csv);
        std::printf("%s: wrote %s/manifest.json and %s/results.csv\n",
                    pass ? "PASS" : "FAIL", out_dir.c_str(), out_dir.c_str());
        return pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

// ---------------------------------------------------------------------------
// master-check

int run_master_check() {
    TimeGrid tg(32, 4.0);
    OperatorSpec spec;
    spec.kind = OperatorKind::interval_dirichlet;
    auto es = std::make_shared<const EigenSystem>(build_eigensystem(spec, 16, 64));
    std::mt19937 rng(20260824u + 47u);
    const SpaceTimeField u = random_band_limited_field(tg, es, rng);
    const SpaceTimeField v = random_band_limited_field(tg, es, rng);
    const SpectralField uh = analyze(u), vh = analyze(v);
    QuadratureSpec q;
    q.relative_tolerance = 1e-8;

    bool ok = true;
    for (double sv : {0.3, 0.7}) {
        const FracOrder s(sv);
        const SpectralField hsu = apply_fractional(uh, s);
        Complex spectral = 0.0;
        for (int m = 0; m < tg.M; ++m)
            for (int k = 0; k < es->modes(); ++k)
                spectral += hsu.coef(m, k) * std::conj(vh.coef(m, k));
        spectral *= tg.drho();
        const MasterFormResult mf = master_form(u, v, s, q);
        const double rel = std::abs(mf.value - spectral) /
                           std::max(std::abs(spectral), 1e-300);
        const bool covered =
            std::abs(mf.value - spectral) <=
            std::max(10.0 * mf.error_estimate, 1e-12 * std::abs(spectral));
        std::printf("s=%.1f: master form %.12e, spectral %.12e, rel err %.3e "
                    "(tol 1e-3), error bound %s\n",
                    sv, mf.value.real(), spectral.real(), rel,
                    covered ? "covers" : "VIOLATED");
        if (!(rel < 1e-3) || !covered) ok = false;
    }
    std::printf("master-check: %s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// acceptance

int run_acceptance_cmd(unsigned seed, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const AcceptanceReport rep = run_acceptance(seed);
    for (const auto& c : rep.criteria)
        std::printf("[%s] criterion %d: %s — %s\n", c.passed ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), c.detail.c_str());
    write_text(out_dir + "/results.csv", rep.results_csv);
    write_text(out_dir + "/manifest.json", rep.manifest_json);
    std::printf("%s; wrote %s/results.csv and %s/manifest.json\n",
                rep.all_passed() ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                out_dir.c_str(), out_dir.c_str());
    return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracpar: fractional parabolic operator toolkit"};
    app.require_subcommand(1);

    std::string selftest_out;
    auto* selftest = app.add_subcommand(
        "specfun-selftest", "cross-check the special-function kernels, emit CSV");
    selftest->add_option("-o,--output", selftest_out, "CSV output path (default stdout)");

    std::string mf_op = "interval_dirichlet", mf_kind = "random", mf_out;
    int mf_K = 8, mf_N = 64, mf_M = 16;
    double mf_T = 4.0;
    unsigned mf_seed = 1;
    auto* makef = app.add_subcommand("make-field",
                                     "generate a sample field file (FPES + sidecar)");
    makef->add_option("--op", mf_op, "operator kind");
    makef->add_option("--K", mf_K, "spectral modes");
    makef->add_option("--N", mf_N, "spatial nodes");
    makef->add_option("--M", mf_M, "time samples");
    makef->add_option("--T", mf_T, "time window");
    makef->add_option("--kind", mf_kind, "random | mode");
    makef->add_option("--seed", mf_seed, "RNG seed");
    makef->add_option("--out", mf_out, "output base path")->required();

    std::string ap_op, ap_route = "multiplier", ap_in, ap_out;
    double ap_s = 0.5;
    auto* apply = app.add_subcommand("apply", "apply H^s to a field file");
    apply->add_option("--op", ap_op, "operator kind (validated against the manifest)");
    apply->add_option("--s", ap_s, "fractional order in (0,1)")->required();
    apply->add_option("--route", ap_route, "multiplier | semigroup | master");
    apply->add_option("--in", ap_in, "input field base path")->required();
    apply->add_option("--out", ap_out, "output field base path")->required();

    std::string ex_op, ex_in, ex_ygrid, ex_out;
    double ex_s = 0.5;
    auto* extend_cmd = app.add_subcommand("extend", "compute the extension U(t,x,y)");
    extend_cmd->add_option("--s", ex_s, "fractional order in (0,1)")->required();
    extend_cmd->add_option("--op", ex_op, "operator kind (validated)");
    extend_cmd->add_option("--in", ex_in, "input field base path")->required();
    extend_cmd->add_option("--ygrid", ex_ygrid, "geometric y grid 'ymin,growth,ymax'");
    extend_cmd->add_option("--out", ex_out, "output extension base path")->required();

    std::string tc_ext, tc_report;
    auto* trace = app.add_subcommand("trace-check",
                                     "verify trace constants and the extension PDE");
    trace->add_option("--ext", tc_ext, "extension base path")->required();
    trace->add_option("--report", tc_report, "JSON report path");

    std::string xf_pair, xf_report;
    double xf_s = 0.5;
    int xf_trials = 5;
    unsigned xf_seed = 1;
    auto* xfer = app.add_subcommand("transfer-check",
                                    "verify an intertwining pair of the catalog");
    xfer->add_option("--pair", xf_pair, "catalog map name")->required();
    xfer->add_option("--s", xf_s, "fractional order in (0,1)");
    xfer->add_option("--trials", xf_trials, "number of random trials");
    xfer->add_option("--report", xf_report, "JSON report path");
    xfer->add_option("--seed", xf_seed, "RNG seed");

    std::string hk_config, hk_out = ".";
    auto* harnack = app.add_subcommand("harnack",
                                       "interior Harnack ensemble from a config file");
    harnack->add_option("--config", hk_config, "config file")->required();
    harnack->add_option("--out", hk_out, "output directory for manifest/results");

    std::string bh_config, bh_out = ".";
    auto* boundary = app.add_subcommand(
        "boundary-harnack", "boundary Harnack ensemble from a config file");
    boundary->add_option("--config", bh_config, "config file")->required();
    boundary->add_option("--out", bh_out, "output directory for manifest/results");

    auto* master = app.add_subcommand(
        "master-check", "master form vs the spectral bilinear form, quick check");

    unsigned ac_seed = 20260824u;
    std::string ac_out = ".";
    auto* accept = app.add_subcommand("acceptance", "run the full acceptance suite");
    accept->add_option("--seed", ac_seed, "ensemble seed");
    accept->add_option("--out", ac_out, "output directory for manifest/results");

    CLI11_PARSE(app, argc, argv);

    try {
        if (selftest->parsed()) return run_specfun_selftest(selftest_out);
        if (makef->parsed())
            return run_make_field(mf_op, mf_K, mf_N, mf_M, mf_T, mf_kind, mf_seed,
                                  mf_out);
        if (apply->parsed()) return run_apply(ap_op, ap_s, ap_route, ap_in, ap_out);
        if (extend_cmd->parsed())
            return run_extend(ex_s, ex_op, ex_in, ex_ygrid, ex_out);
        if (trace->parsed()) return run_trace_check(tc_ext, tc_report);
        if (xfer->parsed())
            return run_transfer_check(xf_pair, xf_s, xf_trials, xf_report, xf_seed);
        if (harnack->parsed()) return run_config_driver(hk_config, hk_out, "interior");
        if (boundary->parsed()) return run_config_driver(bh_config, bh_out, "boundary");
        if (master->parsed()) return run_master_check();
        if (accept->parsed()) return run_acceptance_cmd(ac_seed, ac_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
