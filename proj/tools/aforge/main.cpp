// aforge: command-line front end for the attractor_forge library.
//
// Subcommands: orbit, boundary, critical, code, entropy, lyapunov, srb,
// correlation, scan.  Options come from defaults, then an optional JSON
// config file (--config), then command-line flags (flags win).  Every
// command writes its data files plus a <command>_manifest.json naming the
// effective config, its FNV-1a hash, component versions, and wall time.
//
// Exit codes: 0 success, 1 computation error (error.json written),
// 2 config error (nothing written).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "af/contraction.hpp"
#include "af/critical.hpp"
#include "af/curves.hpp"
#include "af/ergodic.hpp"
#include "af/errors.hpp"
#include "af/geometry.hpp"
#include "af/io.hpp"
#include "af/map_core.hpp"
#include "af/paramscan.hpp"
#include "af/splitting.hpp"
#include "af/symbolic.hpp"

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Options {
    // family / parameters
    std::string family = "henon";
    double a = 2.0;
    double b = 1e-6;
    af::SystemConfig cfg{};
    std::string out_dir = ".";
    std::uint64_t seed = 12345;
    std::size_t threads = 0; // 0: take ATTRACTOR_FORGE_THREADS, else 1

    // command-specific
    double x0 = 0.1, y0 = 0.0; // start point
    double x1 = 1.0, y1 = 0.0; // segment end (srb pushforward)
    std::size_t n = 1000;
    std::size_t nmax = 12;
    std::size_t burn_in = 10000;
    double tie_eps = 1e-9;
    std::size_t n_seeds = 64;
    std::size_t orbit_len = 4096;
    std::size_t grid = 96;
    std::size_t orbit_seeds = 3000;
    std::string source = "pushforward";
    std::size_t n_steps = 200;
    std::size_t n_particles = 100000;
    std::size_t bins_x = 100;
    std::size_t bins_y = 100;
    std::string phi = "x";
    std::string psi = "x";
    std::size_t n_samples = 1000000;
    std::size_t lag_max = 40;
    double a_lo = 2.0, a_hi = 2.0, a_step = 1e-3;
    std::size_t horizon = 30;
    std::size_t n0 = 1;
};

// Registry mapping config-file keys to CLI options and setters, so the
// config file fills exactly the values not given as flags.
struct Registry {
    std::map<std::string, CLI::Option*> cli;
    std::map<std::string, std::function<void(const json&)>> set;
    std::map<std::string, std::string> owner; // key -> command ("" = global)

    template <typename T>
    void add(CLI::App* app, const std::string& cmd, const std::string& key,
             T& var, const std::string& desc) {
        const std::string id = cmd.empty() ? key : cmd + ":" + key;
        cli[id] = app->add_option("--" + key, var, desc);
        set[id] = [&var](const json& v) { var = v.get<T>(); };
        owner[id] = cmd;
    }
};

std::uint64_t env_threads() {
    const char* s = std::getenv("ATTRACTOR_FORGE_THREADS");
    if (!s) return 1;
    const long v = std::atol(s);
    return v > 0 ? static_cast<std::uint64_t>(v) : 1;
}

std::string hash_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(af::io::fnv1a(s)));
    return buf;
}

json version_block() {
    return json{{"aforge", kVersion},
                {"attractor_forge", kVersion},
                {"compiler", __VERSION__}};
}

std::string error_type_of(const std::exception& e) {
    if (dynamic_cast<const af::OrbitEscape*>(&e)) return "orbit_escape";
    if (dynamic_cast<const af::HyperbolicityLost*>(&e)) return "hyperbolicity_lost";
    if (dynamic_cast<const af::RefinementBudgetExceeded*>(&e))
        return "refinement_budget_exceeded";
    if (dynamic_cast<const af::NoSignChange*>(&e)) return "no_sign_change";
    if (dynamic_cast<const af::MultipleRoots*>(&e)) return "multiple_roots";
    if (dynamic_cast<const af::InequalityViolation*>(&e))
        return "inequality_violation";
    if (dynamic_cast<const af::DegenerateMatrix*>(&e)) return "degenerate_matrix";
    if (dynamic_cast<const af::ConfigError*>(&e)) return "config_error";
    if (dynamic_cast<const af::Error*>(&e)) return "error";
    return "exception";
}

af::MapFamily make_family(const Options& o) {
    if (o.family == "henon") return af::henon_family(o.a, o.b);
    throw af::ConfigError("unknown family '" + o.family + "' (supported: henon)");
}

af::Observable make_observable(const std::string& name) {
    if (name == "x") return [](af::Vec2 z) { return z.x; };
    if (name == "y") return [](af::Vec2 z) { return z.y; };
    if (name == "x2") return [](af::Vec2 z) { return z.x * z.x; };
    throw af::ConfigError("unknown observable '" + name +
                          "' (supported: x, y, x2)");
}

void write_manifest(const Options& o, const std::string& cmd, const json& echo,
                    const std::vector<std::string>& outputs, double wall_s) {
    json m{{"command", cmd},
           {"config", echo},
           {"config_hash", hash_hex(echo.dump())},
           {"versions", version_block()},
           {"wall_time_s", wall_s},
           {"outputs", outputs}};
    af::io::write_text_file(o.out_dir + "/" + cmd + "_manifest.json",
                            m.dump(2) + "\n");
}

json global_echo(const Options& o) {
    return json{{"family", o.family},
                {"a", o.a},
                {"b", o.b},
                {"delta", o.cfg.delta},
                {"rho", o.cfg.rho},
                {"alpha", o.cfg.alpha},
                {"beta", o.cfg.beta},
                {"c", o.cfg.c},
                {"c0", o.cfg.c0},
                {"theta", o.cfg.theta},
                {"eps0", o.cfg.eps0},
                {"k_delta", o.cfg.k_delta},
                {"kmax", o.cfg.kmax},
                {"ia_gate_start", o.cfg.ia_gate_start},
                {"mu_star", o.cfg.mu_star},
                {"out_dir", o.out_dir},
                {"seed", o.seed},
                {"threads", o.threads}};
}

// markers for the boundary command: tangency points of the matching
// component at each generation, located by their curve parameter
struct MarkCtx {
    const af::Hierarchy* h;
    int calls = 0;
};

std::vector<std::pair<double, std::string>> hierarchy_markers(
    const af::SampledCurve&, int gen, void* vctx) {
    auto* ctx = static_cast<MarkCtx*>(vctx);
    const int component = (ctx->calls++ % 2 == 0) ? 0 : 1; // top then bottom
    std::vector<std::pair<double, std::string>> out;
    if (gen >= 0 && gen < static_cast<int>(ctx->h->levels.size())) {
        for (const af::CriticalRegion& r : ctx->h->levels[gen]) {
            for (const af::CriticalPoint* cp : {&r.top, &r.bottom}) {
                if (cp->lineage != component) continue;
                out.emplace_back(cp->param, "c" + std::to_string(gen) + "." +
                                                std::to_string(r.index));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int run_command(const Options& o, const std::string& cmd, const json& echo,
                const std::function<std::vector<std::string>()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        std::filesystem::create_directories(o.out_dir);
        const std::vector<std::string> outputs = body();
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        write_manifest(o, cmd, echo, outputs, wall);
        return 0;
    } catch (const std::exception& e) {
        json err{{"command", cmd},
                 {"error_type", error_type_of(e)},
                 {"message", e.what()}};
        try {
            af::io::write_text_file(o.out_dir + "/error.json", err.dump(2) + "\n");
        } catch (...) {
        }
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

std::vector<std::string> cmd_orbit(const Options& o) {
    const af::MapFamily m = make_family(o);
    const std::vector<af::Vec2> pts = af::iterate_orbit(m, {o.x0, o.y0}, o.n);
    std::string out = "i,x,y\n";
    for (std::size_t i = 0; i < pts.size(); ++i)
        out += af::io::csv_row({af::io::fmt_u(i), af::io::fmt_g17(pts[i].x),
                                af::io::fmt_g17(pts[i].y)});
    const std::string path = o.out_dir + "/orbit.csv";
    af::io::write_text_file(path, out);
    return {path};
}

std::vector<std::string> cmd_boundary(const Options& o) {
    const af::MapFamily m = make_family(o);
    af::SystemConfig cfg = o.cfg;
    cfg.kmax = std::min<int>(cfg.kmax, static_cast<int>(o.n));
    const af::Hierarchy h = af::build_hierarchy(m, cfg);
    MarkCtx ctx{&h, 0};
    const af::BoundarySet bs =
        af::boundary_evolution(m, o.n, {}, &hierarchy_markers, &ctx);
    std::vector<std::string> outputs;
    for (std::size_t g = 0; g < bs.top.size(); ++g) {
        const std::string tp =
            o.out_dir + "/boundary_top_" + std::to_string(g) + ".csv";
        const std::string bp =
            o.out_dir + "/boundary_bottom_" + std::to_string(g) + ".csv";
        af::write_curve_csv(bs.top[g], tp);
        af::write_curve_csv(bs.bottom[g], bp);
        outputs.push_back(tp);
        outputs.push_back(bp);
    }
    return outputs;
}

std::vector<std::string> cmd_critical(const Options& o) {
    const af::MapFamily m = make_family(o);
    const af::Hierarchy h = af::build_hierarchy(m, o.cfg);
    const std::string path = o.out_dir + "/hierarchy.json";
    af::write_hierarchy_json(h, path);
    return {path};
}

std::vector<std::string> cmd_code(const Options& o) {
    const af::MapFamily m = make_family(o);
    const std::vector<int> labels =
        af::itinerary(m, {o.x0, o.y0}, o.n, o.tie_eps);
    std::string out = "i,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
        out += af::io::csv_row({af::io::fmt_u(i), af::io::fmt_i(labels[i])});
    const std::string path = o.out_dir + "/code.csv";
    af::io::write_text_file(path, out);
    return {path};
}

std::vector<std::string> cmd_entropy(const Options& o) {
    const af::MapFamily m = make_family(o);
    const af::Hierarchy h = af::build_hierarchy(m, o.cfg);
    af::SymbolSampling s;
    s.n_seeds = o.n_seeds;
    s.orbit_len = o.orbit_len;
    s.burn_in = o.burn_in;
    s.tie_eps = o.tie_eps;
    s.seed = o.seed;
    s.threads = o.threads;
    af::PeriodicOptions p;
    p.grid = o.grid;
    p.orbit_seeds = o.orbit_seeds;
    p.seed = o.seed ^ 0x517cc1b727220a95ull;
    const af::EntropyReport rep = af::entropy_report(m, h, o.nmax, s, p);
    const std::string csv = o.out_dir + "/entropy_report.csv";
    af::write_entropy_csv(rep, csv);
    json j{{"h_blocks", rep.h_blocks},
           {"h_fuzzy", rep.h_fuzzy},
           {"h_periodic", rep.h_periodic},
           {"circle_wrap_caveat", rep.circle_wrap_caveat},
           {"notes", rep.notes}};
    const std::string js = o.out_dir + "/entropy_report.json";
    af::io::write_text_file(js, j.dump(2) + "\n");
    return {csv, js};
}

std::vector<std::string> cmd_lyapunov(const Options& o) {
    const af::MapFamily m = make_family(o);
    const af::LyapunovResult r =
        af::lyapunov_exponent(m, {o.x0, o.y0}, o.n, o.burn_in);
    json j{{"lambda1", r.lambda1},
           {"lambda2", r.lambda2},
           {"mean_log_det", r.mean_log_det},
           {"n_used", r.n_used},
           {"z_end", {r.z_end.x, r.z_end.y}}};
    const std::string path = o.out_dir + "/lyapunov.json";
    af::io::write_text_file(path, j.dump(2) + "\n");
    return {path};
}

std::vector<std::string> cmd_srb(const Options& o) {
    const af::MapFamily m = make_family(o);
    af::HistogramGrid grid;
    grid.nx = o.bins_x;
    grid.ny = o.bins_y;
    af::SRBHistogram h;
    if (o.source == "pushforward") {
        const af::SampledCurve seg =
            af::make_segment({o.x0, o.y0}, {o.x1, o.y1}, 2001);
        h = af::srb_pushforward(m, seg, o.n_steps, o.n_particles, grid,
                                o.threads);
    } else if (o.source == "birkhoff") {
        h = af::srb_birkhoff(m, {o.x0, o.y0}, o.n, o.burn_in, grid);
    } else {
        throw af::ConfigError("srb source must be 'pushforward' or 'birkhoff'");
    }
    const std::string csv = o.out_dir + "/srb.csv";
    af::write_histogram_csv(h, csv);
    json j{{"source", o.source},
           {"total_mass", h.total_mass()},
           {"dropped_fraction", h.dropped_fraction},
           {"mass_loss_warning", h.mass_loss_warning},
           {"nx", h.nx},
           {"ny", h.ny}};
    const std::string js = o.out_dir + "/srb.json";
    af::io::write_text_file(js, j.dump(2) + "\n");
    return {csv, js};
}

std::vector<std::string> cmd_correlation(const Options& o) {
    const af::MapFamily m = make_family(o);
    const af::CorrelationFit f =
        af::correlation_fit(m, make_observable(o.phi), make_observable(o.psi),
                            {o.x0, o.y0}, o.n_samples, o.lag_max, o.burn_in);
    const std::string csv = o.out_dir + "/correlation.csv";
    af::write_correlation_csv(f, csv);
    json j{{"lambda_fit", f.lambda_fit},
           {"K_fit", f.K_fit},
           {"r2", f.r2},
           {"noise_floor", f.noise_floor},
           {"n_fitted", f.n_fitted},
           {"all_below_floor", f.all_below_floor}};
    const std::string js = o.out_dir + "/correlation.json";
    af::io::write_text_file(js, j.dump(2) + "\n");
    return {csv, js};
}

std::vector<std::string> cmd_scan(const Options& o) {
    af::ScanSpec spec;
    spec.a_lo = o.a_lo;
    spec.a_hi = o.a_hi;
    spec.a_step = o.a_step;
    spec.b = o.b;
    spec.horizon = o.horizon;
    spec.n0 = o.n0;
    spec.cfg = o.cfg;
    spec.threads = o.threads;
    const af::ScanReport rep = af::scan(spec);
    const std::string csv = o.out_dir + "/scan.csv";
    const std::string js = o.out_dir + "/scan.json";
    af::write_scan_csv(rep, csv);
    af::write_scan_json(rep, js);
    return {csv, js};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"attractor_forge analysis tool"};
    app.require_subcommand(1);

    Options o;
    Registry reg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");

    // global options (valid for every command, also via config file)
    reg.add(&app, "", "family", o.family, "map family (henon)");
    reg.add(&app, "", "a", o.a, "family parameter a");
    reg.add(&app, "", "b", o.b, "family parameter b");
    reg.add(&app, "", "delta", o.cfg.delta, "critical-region half width");
    reg.add(&app, "", "rho", o.cfg.rho, "per-level window shrink factor");
    reg.add(&app, "", "alpha", o.cfg.alpha, "distance-decay exponent");
    reg.add(&app, "", "beta", o.cfg.beta, "separation exponent");
    reg.add(&app, "", "c", o.cfg.c, "derivative-growth rate");
    reg.add(&app, "", "c0", o.cfg.c0, "derivative-growth prefactor");
    reg.add(&app, "", "theta", o.cfg.theta, "angle budget");
    reg.add(&app, "", "eps0", o.cfg.eps0, "recombination tolerance");
    reg.add(&app, "", "k_delta", o.cfg.k_delta, "curve slope/curvature scale");
    reg.add(&app, "", "kmax", o.cfg.kmax, "hierarchy depth limit");
    reg.add(&app, "", "ia_gate_start", o.cfg.ia_gate_start,
            "first step the admissibility checks gate on");
    reg.add(&app, "", "mu_star", o.cfg.mu_star, "smallest distance scale index");
    reg.add(&app, "", "out_dir", o.out_dir, "output directory");
    reg.add(&app, "", "seed", o.seed, "RNG seed for sampling");
    reg.add(&app, "", "threads", o.threads,
            "worker threads (0: ATTRACTOR_FORGE_THREADS or 1)");

    CLI::App* c_orbit = app.add_subcommand("orbit", "iterate one orbit to CSV");
    reg.add(c_orbit, "orbit", "x0", o.x0, "start x");
    reg.add(c_orbit, "orbit", "y0", o.y0, "start y");
    reg.add(c_orbit, "orbit", "n", o.n, "steps");

    CLI::App* c_boundary =
        app.add_subcommand("boundary", "evolve the region boundary with markers");
    reg.add(c_boundary, "boundary", "n", o.n, "generations");

    app.add_subcommand("critical", "build the tangency hierarchy to JSON");

    CLI::App* c_code = app.add_subcommand("code", "symbolic itinerary of a point");
    reg.add(c_code, "code", "x0", o.x0, "start x");
    reg.add(c_code, "code", "y0", o.y0, "start y");
    reg.add(c_code, "code", "n", o.n, "symbols");
    reg.add(c_code, "code", "tie_eps", o.tie_eps, "ambiguity half width");

    CLI::App* c_entropy =
        app.add_subcommand("entropy", "block/periodic/monotone growth counters");
    reg.add(c_entropy, "entropy", "nmax", o.nmax, "largest block length");
    reg.add(c_entropy, "entropy", "n_seeds", o.n_seeds, "sample orbits");
    reg.add(c_entropy, "entropy", "orbit_len", o.orbit_len, "recorded steps");
    reg.add(c_entropy, "entropy", "burn_in", o.burn_in, "discarded steps");
    reg.add(c_entropy, "entropy", "tie_eps", o.tie_eps, "ambiguity half width");
    reg.add(c_entropy, "entropy", "grid", o.grid, "periodic grid seeds per row");
    reg.add(c_entropy, "entropy", "orbit_seeds", o.orbit_seeds,
            "periodic attractor seeds");

    CLI::App* c_ly = app.add_subcommand("lyapunov", "Lyapunov exponents");
    reg.add(c_ly, "lyapunov", "x0", o.x0, "start x");
    reg.add(c_ly, "lyapunov", "y0", o.y0, "start y");
    reg.add(c_ly, "lyapunov", "n", o.n, "iterates");
    reg.add(c_ly, "lyapunov", "burn_in", o.burn_in, "discarded steps");

    CLI::App* c_srb = app.add_subcommand("srb", "empirical invariant measure");
    reg.add(c_srb, "srb", "source", o.source, "pushforward | birkhoff");
    reg.add(c_srb, "srb", "x0", o.x0, "segment start / orbit start x");
    reg.add(c_srb, "srb", "y0", o.y0, "segment start / orbit start y");
    reg.add(c_srb, "srb", "x1", o.x1, "segment end x (pushforward)");
    reg.add(c_srb, "srb", "y1", o.y1, "segment end y (pushforward)");
    reg.add(c_srb, "srb", "n_steps", o.n_steps, "push-forward steps");
    reg.add(c_srb, "srb", "n_particles", o.n_particles, "particles");
    reg.add(c_srb, "srb", "n", o.n, "orbit samples (birkhoff)");
    reg.add(c_srb, "srb", "burn_in", o.burn_in, "discarded steps (birkhoff)");
    reg.add(c_srb, "srb", "bins_x", o.bins_x, "histogram columns");
    reg.add(c_srb, "srb", "bins_y", o.bins_y, "histogram rows");

    CLI::App* c_corr =
        app.add_subcommand("correlation", "autocovariance decay fit");
    reg.add(c_corr, "correlation", "phi", o.phi, "observable (x, y, x2)");
    reg.add(c_corr, "correlation", "psi", o.psi, "observable (x, y, x2)");
    reg.add(c_corr, "correlation", "x0", o.x0, "start x");
    reg.add(c_corr, "correlation", "y0", o.y0, "start y");
    reg.add(c_corr, "correlation", "n_samples", o.n_samples, "orbit samples");
    reg.add(c_corr, "correlation", "lag_max", o.lag_max, "largest lag");
    reg.add(c_corr, "correlation", "burn_in", o.burn_in, "discarded steps");

    CLI::App* c_scan = app.add_subcommand("scan", "parameter exclusion scan");
    reg.add(c_scan, "scan", "a_lo", o.a_lo, "grid start");
    reg.add(c_scan, "scan", "a_hi", o.a_hi, "grid end");
    reg.add(c_scan, "scan", "a_step", o.a_step, "grid step");
    reg.add(c_scan, "scan", "horizon", o.horizon, "check horizon");
    reg.add(c_scan, "scan", "n0", o.n0, "start-up free iterates");

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // parse problems are config errors
    }

    const std::string cmd = app.get_subcommands().front()->get_name();

    bool mu_star_given = reg.cli["mu_star"]->count() > 0;
    bool delta_given = reg.cli["delta"]->count() > 0;

    // config file fills every setting not given as a flag
    if (!config_path.empty()) {
        json j;
        try {
            j = json::parse(af::io::read_text_file(config_path));
        } catch (const std::exception& e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 2;
        }
        if (!j.is_object()) {
            std::fprintf(stderr, "config error: top level must be an object\n");
            return 2;
        }
        for (const auto& [key, value] : j.items()) {
            const std::string gid = key;
            const std::string cid = cmd + ":" + key;
            const std::string id =
                reg.set.count(cid) ? cid : (reg.set.count(gid) ? gid : "");
            if (id.empty()) {
                std::fprintf(stderr,
                             "config error: unknown key '%s' for command '%s'\n",
                             key.c_str(), cmd.c_str());
                return 2;
            }
            if (reg.cli[id]->count() > 0) continue; // flag wins
            try {
                reg.set[id](value);
            } catch (const std::exception& e) {
                std::fprintf(stderr, "config error: key '%s': %s\n", key.c_str(),
                             e.what());
                return 2;
            }
            if (key == "mu_star") mu_star_given = true;
            if (key == "delta") delta_given = true;
        }
    }

    // mu_star fixes delta unless delta was set on its own
    if (mu_star_given && !delta_given)
        o.cfg.delta = af::SystemConfig::with_mu_star(o.cfg.mu_star).delta;

    if (o.threads == 0) o.threads = env_threads();

    // validate before any output is produced
    try {
        for (const std::string& w : o.cfg.validate(o.b))
            std::fprintf(stderr, "warning: %s\n", w.c_str());
        make_family(o);
        if (cmd == "srb" && o.source != "pushforward" && o.source != "birkhoff")
            throw af::ConfigError("srb source must be 'pushforward' or 'birkhoff'");
        if (cmd == "correlation") {
            make_observable(o.phi);
            make_observable(o.psi);
            if (o.n_samples <= o.lag_max + 1)
                throw af::ConfigError("n_samples must exceed lag_max + 1");
        }
        if (cmd == "scan") {
            af::ScanSpec s;
            s.a_lo = o.a_lo;
            s.a_hi = o.a_hi;
            s.a_step = o.a_step;
            af::scan_grid(s);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }

    json echo = global_echo(o);
    std::function<std::vector<std::string>()> body;
    if (cmd == "orbit") {
        echo["x0"] = o.x0;
        echo["y0"] = o.y0;
        echo["n"] = o.n;
        body = [&] { return cmd_orbit(o); };
    } else if (cmd == "boundary") {
        echo["n"] = o.n;
        body = [&] { return cmd_boundary(o); };
    } else if (cmd == "critical") {
        body = [&] { return cmd_critical(o); };
    } else if (cmd == "code") {
        echo["x0"] = o.x0;
        echo["y0"] = o.y0;
        echo["n"] = o.n;
        echo["tie_eps"] = o.tie_eps;
        body = [&] { return cmd_code(o); };
    } else if (cmd == "entropy") {
        echo["nmax"] = o.nmax;
        echo["n_seeds"] = o.n_seeds;
        echo["orbit_len"] = o.orbit_len;
        echo["burn_in"] = o.burn_in;
        echo["tie_eps"] = o.tie_eps;
        echo["grid"] = o.grid;
        echo["orbit_seeds"] = o.orbit_seeds;
        body = [&] { return cmd_entropy(o); };
    } else if (cmd == "lyapunov") {
        echo["x0"] = o.x0;
        echo["y0"] = o.y0;
        echo["n"] = o.n;
        echo["burn_in"] = o.burn_in;
        body = [&] { return cmd_lyapunov(o); };
    } else if (cmd == "srb") {
        echo["source"] = o.source;
        echo["x0"] = o.x0;
        echo["y0"] = o.y0;
        echo["x1"] = o.x1;
        echo["y1"] = o.y1;
        echo["n_steps"] = o.n_steps;
        echo["n_particles"] = o.n_particles;
        echo["n"] = o.n;
        echo["burn_in"] = o.burn_in;
        echo["bins_x"] = o.bins_x;
        echo["bins_y"] = o.bins_y;
        body = [&] { return cmd_srb(o); };
    } else if (cmd == "correlation") {
        echo["phi"] = o.phi;
        echo["psi"] = o.psi;
        echo["x0"] = o.x0;
        echo["y0"] = o.y0;
        echo["n_samples"] = o.n_samples;
        echo["lag_max"] = o.lag_max;
        echo["burn_in"] = o.burn_in;
        body = [&] { return cmd_correlation(o); };
    } else if (cmd == "scan") {
        echo["a_lo"] = o.a_lo;
        echo["a_hi"] = o.a_hi;
        echo["a_step"] = o.a_step;
        echo["horizon"] = o.horizon;
        echo["n0"] = o.n0;
        body = [&] { return cmd_scan(o); };
    } else {
        std::fprintf(stderr, "config error: unknown command\n");
        return 2;
    }
    return run_command(o, cmd, echo, body);
}
