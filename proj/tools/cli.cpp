#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "laguerre/errors.hpp"
#include "laguerre/io.hpp"
#include "laguerre/laws.hpp"
#include "laguerre/mc.hpp"
#include "laguerre/specfun.hpp"
#include "laguerre/symfun.hpp"

#ifndef LAGUERRE_VERSION
#define LAGUERRE_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace laguerre;

namespace {

const char* kVersion = "laguerre " LAGUERRE_VERSION;

// Every flag is read as text so that config-file values take the same path.
const std::vector<std::string> kKeys = {"m",     "delta",  "nu",   "x0",   "t",      "dt",        "paths",
                                        "seed",  "grid",   "tol",  "out",  "threads", "u",         "y",
                                        "lambda", "scheme", "check", "a",   "b",       "x",         "max-cells"};

struct Flags {
    std::map<std::string, std::string> v;
    std::string law;

    bool has(const std::string& k) const { return v.count(k) && !v.at(k).empty(); }
    const std::string& str(const std::string& k) const { return v.at(k); }

    double real(const std::string& k, std::optional<double> def = std::nullopt) const {
        if (!has(k)) {
            if (def) return *def;
            throw ConfigError("--" + k + " is required");
        }
        const auto l = parse_double_list(str(k));
        if (l.size() != 1) throw ConfigError("--" + k + " expects one number");
        return l[0];
    }

    long integer(const std::string& k, long def) const {
        if (!has(k)) return def;
        const double x = real(k);
        if (x != std::floor(x) || std::abs(x) > 9e15) throw ConfigError("--" + k + " expects an integer");
        return static_cast<long>(x);
    }

    std::vector<double> list(const std::string& k) const {
        if (!has(k)) throw ConfigError("--" + k + " is required");
        return parse_double_list(str(k));
    }
};

// "a:b:n" linear, "a:b:n:log" geometric, or a comma list.
std::vector<double> parse_grid(const std::string& s) {
    if (s.empty()) throw ConfigError("--grid is required");
    if (s.find(':') == std::string::npos) return parse_double_list(s);
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3 && !(parts.size() == 4 && parts[3] == "log"))
        throw ConfigError("--grid: expected a:b:n, a:b:n:log or a comma list, got '" + s + "'");
    const double a = parse_double_list(parts[0]).at(0), b = parse_double_list(parts[1]).at(0);
    const double nd = parse_double_list(parts[2]).at(0);
    if (nd < 1 || nd != std::floor(nd) || nd > 1e7) throw ConfigError("--grid: bad point count in '" + s + "'");
    const int n = static_cast<int>(nd);
    const bool geo = parts.size() == 4;
    if (geo && !(a > 0 && b > 0)) throw ConfigError("--grid: a geometric grid needs positive ends");
    std::vector<double> g;
    for (int i = 0; i < n; ++i) {
        const double w = n == 1 ? 0.0 : double(i) / (n - 1);
        g.push_back(geo ? a * std::pow(b / a, w) : a + (b - a) * w);
    }
    return g;
}

// m values: diagonal; 2 m^2 values: row-major (re, im) entries.
HermitianMatrix parse_matrix(const std::vector<double>& v, int m, const std::string& what) {
    if (static_cast<int>(v.size()) == m) return HermitianMatrix::diagonal(v);
    if (static_cast<int>(v.size()) == 2 * m * m) {
        Eigen::MatrixXcd a(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) a(i, j) = cdouble(v[2 * (i * m + j)], v[2 * (i * m + j) + 1]);
        try {
            return HermitianMatrix(a);
        } catch (const DomainError& e) {
            throw ConfigError(what + ": " + e.what());
        }
    }
    throw ConfigError(what + ": expected " + std::to_string(m) + " diagonal entries or " + std::to_string(2 * m * m) +
                      " (re, im) entries, got " + std::to_string(v.size()));
}

LaguerreModel build_model(const Flags& f) {
    std::vector<double> x0;
    if (f.has("x0")) x0 = f.list("x0");
    int m = 0;
    if (f.has("m")) {
        m = static_cast<int>(f.integer("m", 0));
    } else if (!x0.empty()) {
        m = static_cast<int>(x0.size());
    } else {
        throw ConfigError("--m or --x0 is required");
    }
    if (m < 1) throw ConfigError("--m must be >= 1");
    double delta;
    if (f.has("delta")) {
        delta = f.real("delta");
        if (f.has("nu") && std::abs(delta - (m + f.real("nu"))) > 1e-12)
            throw ConfigError("--delta and --nu disagree: nu must equal delta - m");
    } else if (f.has("nu")) {
        delta = m + f.real("nu");
    } else {
        throw ConfigError("--delta or --nu is required");
    }
    if (!(delta >= 0.0)) throw ConfigError("model: delta must be >= 0, got " + format_double(delta));
    const HermitianMatrix x = x0.empty() ? HermitianMatrix::zero(m) : parse_matrix(x0, m, "--x0");
    return LaguerreModel(m, delta, x);
}

json model_json(const LaguerreModel& model) {
    json x = json::array();
    for (int i = 0; i < model.m; ++i)
        for (int j = 0; j < model.m; ++j) x.push_back({model.x0(i, j).real(), model.x0(i, j).imag()});
    return {{"m", model.m}, {"delta", model.delta}, {"nu", model.nu()}, {"x0", x}};
}

json flags_json(const Flags& f) {
    json j = json::object();
    for (const auto& [k, v] : f.v)
        if (!v.empty()) j[k] = v;
    return j;
}

std::string csv_with_header(const json& meta, const std::string& header, const std::vector<double>& xs,
                            const std::vector<double>& ys) {
    std::ostringstream os;
    os << "# " << meta.dump() << "\n" << header << "\n";
    for (size_t i = 0; i < xs.size(); ++i) os << format_double(xs[i]) << ',' << format_double(ys[i]) << "\n";
    return os.str();
}

void emit(const Flags& f, const std::string& content, std::ostream& out) {
    if (f.has("out"))
        write_file(f.str("out"), content);
    else
        out << content;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Flags& f, std::ostream& out) {
    const LaguerreModel model = build_model(f);
    const double T = f.real("t", 1.0), dt = f.real("dt", 1e-3);
    const long paths = f.integer("paths", 1), seed = f.integer("seed", 1);
    const std::string scheme = f.has("scheme") ? f.str("scheme") : "eigen";
    if (paths < 1) throw ConfigError("--paths must be >= 1");
    if (seed < 0) throw ConfigError("--seed must be >= 0");
    if (scheme != "eigen" && scheme != "matrix" && scheme != "gram")
        throw ConfigError("--scheme must be eigen, matrix or gram");
    step_count(dt, T);
    if (scheme == "gram") GramStepper(model, dt);
    const fs::path dir = f.has("out") ? fs::path(f.str("out")) : fs::path(".");
    fs::create_directories(dir);

    json files = json::array();
    for (long p = 0; p < paths; ++p) {
        std::ostringstream os;
        if (scheme == "eigen")
            write_eigen_csv(os, simulate_eigen(model, dt, T, seed, p));
        else if (scheme == "matrix")
            write_matrix_csv(os, simulate_matrix(model, dt, T, seed, p));
        else
            write_matrix_csv(os, simulate_matrix_gram(model, dt, T, seed, p));
        const std::string name = "path_" + std::to_string(p) + ".csv";
        write_file((dir / name).string(), os.str());
        files.push_back(name);
    }
    json meta = {{"version", kVersion},
                 {"command", "simulate"},
                 {"model", model_json(model)},
                 {"scheme", scheme},
                 {"T", T},
                 {"dt", dt},
                 {"seed", seed},
                 {"paths", paths},
                 {"stream", "philox4x32-10, path index = file index"},
                 {"files", files},
                 {"flags", flags_json(f)}};
    write_file((dir / "simulate.meta.json").string(), meta.dump(2) + "\n");
    out << "wrote " << paths << " path file(s) to " << dir.string() << "\n";
    return 0;
}

// ---------------------------------------------------------------- law

int cmd_law(const Flags& f, std::ostream& out) {
    const std::string& law = f.law;
    static const std::vector<std::string> laws = {"laplace", "density", "qt", "hw", "t0", "s0", "detmoment"};
    if (std::find(laws.begin(), laws.end(), law) == laws.end())
        throw CLI::ValidationError("law", "unknown law '" + law + "'; expected laplace|density|qt|hw|t0|s0|detmoment");
    const std::vector<double> grid = parse_grid(f.has("grid") ? f.str("grid") : "");
    json meta = {{"version", kVersion}, {"command", "law"}, {"law", law}, {"flags", flags_json(f)}};
    std::vector<double> ys;

    if (law == "hw") {
        const auto l = f.list("lambda");
        if (l.size() != 2) throw ConfigError("--lambda expects two values l1,l2");
        QuadratureSpec spec;
        if (f.has("tol")) spec.abs_tol = f.real("tol");
        spec.max_subdivisions = static_cast<int>(f.integer("max-cells", spec.max_subdivisions));
        long cells = 0;
        double y_max = 0.0;
        int contour = 0;
        for (double v : grid) {
            const HWResult r = l[0] == l[1] ? hw_density_equal(l[0], v, spec) : hw_density_m2({l[0], l[1], v}, spec);
            ys.push_back(r.value);
            cells += r.cells;
            y_max = std::max(y_max, r.y_max);
            contour += r.contour;
        }
        meta["lambda"] = l;
        meta["measure"] = "Lebesgue on v > 0";
        meta["quadrature"] = {{"abs_tol", spec.abs_tol},
                              {"rel_tol", spec.rel_tol},
                              {"envelope_factor", spec.envelope_factor},
                              {"max_subdivisions", spec.max_subdivisions},
                              {"contour_below", spec.contour_below},
                              {"cells", cells},
                              {"max_y", y_max},
                              {"contour_points", contour}};
        emit(f, csv_with_header(meta, "v,f", grid, ys), out);
        return 0;
    }

    const LaguerreModel model = build_model(f);
    meta["model"] = model_json(model);
    std::string header;
    if (law == "laplace") {
        const HermitianMatrix u = parse_matrix(f.list("u"), model.m, "--u");
        for (double t : grid) ys.push_back(laplace_transform(model, t, u));
        header = "t,laplace";
    } else if (law == "density") {
        const HermitianMatrix y = parse_matrix(f.list("y"), model.m, "--y");
        for (double t : grid) ys.push_back(transition_density(model, t, model.x0, y));
        meta["measure"] = "Lebesgue on the real coordinates of Hermitian matrices";
        header = "t,density";
    } else if (law == "qt") {
        const SpectrumVector y(f.list("y"));
        for (double t : grid) ys.push_back(eigen_semigroup(model.m, model.delta, t, model.x0.spectrum(), y));
        meta["measure"] = "Lebesgue on the ordered chamber y1 > ... > ym > 0";
        header = "t,q";
    } else if (law == "t0") {
        if (!(model.nu() > -1.0 && model.nu() < 0.0)) throw ConfigError("law t0 needs -1 < nu < 0 (delta = m + nu)");
        for (double t : grid) ys.push_back(t0_tail(model.m, -model.nu(), model.x0.spectrum(), t));
        header = "t,tail";
    } else if (law == "s0") {
        if (model.m != 2) throw ConfigError("law s0 needs m = 2");
        if (!(model.nu() > -1.0 && model.nu() < 0.0)) throw ConfigError("law s0 needs -1 < nu < 0 (delta = m + nu)");
        const SpectrumVector x = model.x0.spectrum();
        for (double u : grid) ys.push_back(s0_density(-model.nu(), x[0], x[1], u));
        meta["measure"] = "Lebesgue on u > 0";
        header = "u,density";
    } else {
        const double t = f.real("t", 1.0);
        meta["t"] = t;
        for (double s : grid) ys.push_back(det_moment(model, t, s));
        header = "s,moment";
    }
    emit(f, csv_with_header(meta, header, grid, ys), out);
    return 0;
}

// ---------------------------------------------------------------- hypergeom

int cmd_hypergeom(const Flags& f, std::ostream& out) {
    const std::vector<double> a = f.has("a") ? f.list("a") : std::vector<double>{};
    const std::vector<double> b = f.has("b") ? f.list("b") : std::vector<double>{};
    const SpectrumVector x(f.list("x"));
    const double tol = f.real("tol", 1e-14);
    const SeriesResult s = hyp_matrix_series(a, b, x, {tol, 60, false});
    const DetValue d = gross_richards(a, b, x);
    json j = {{"a", a},
              {"b", b},
              {"x", x.values},
              {"series", s.value},
              {"series_converged", s.converged},
              {"series_weight", s.max_weight},
              {"determinant", d.value},
              {"jittered", d.jittered},
              {"rel_diff", std::abs(s.value - d.value) / std::max(std::abs(d.value), 1e-300)}};
    out << j.dump(2) << "\n";
    return s.converged ? 0 : 2;
}

// ---------------------------------------------------------------- verify

struct CheckDef {
    std::string name;
    long paths;
    double dt;
    std::function<std::vector<McReport>(long, uint64_t, const McOptions&, std::vector<DensityBin>*)> run;
};

HermitianMatrix diag(std::vector<double> d) { return HermitianMatrix::diagonal(d); }

std::vector<CheckDef> suite() {
    using V = std::vector<McReport>;
    return {
        {"laplace", 20000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return V{check_laplace(LaguerreModel(2, 2.5, diag({1, 2})), 1.0, diag({0.3, 0.1}), n, s, o)};
         }},
        {"trace_besq", 20000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return V{check_trace_besq(LaguerreModel(2, 2.0, diag({1, 0.5})), 1.0, 0.3, n, s, o)};
         }},
        {"additivity", 20000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return V{check_additivity(LaguerreModel(1, 1.0, diag({0.5})), LaguerreModel(1, 1.0, diag({0.3})), 1.0,
                                       diag({0.4}), n, s, o)};
         }},
        {"t0", 10000, 1e-4,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return check_t0(LaguerreModel::from_spectrum(1.5, {2, 1}), {0.25, 0.5, 1.0, 2.0}, n, s, o);
         }},
        {"eigen_density", 10000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, std::vector<DensityBin>* bins) {
             return V{check_eigen_density(LaguerreModel::from_spectrum(2.5, {2, 1}), 1.0, 8, n, s, o, bins)};
         }},
        {"girsanov", 20000, 2e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return V{check_girsanov(LaguerreModel(2, 2.0, diag({2, 1})), 0.5, 1.0, diag({0.3, 0.1}), n, s, o)};
         }},
        {"martingale", 10000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return check_martingale(LaguerreModel(2, 2.5, diag({1, 2})), 1.0, diag({0.3, 0.1}),
                                     {0.0, 0.25, 0.5, 0.75, 1.0}, n, s, o);
         }},
        {"det_moment", 20000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return V{check_det_moment(LaguerreModel(2, 2.5, diag({1, 1})), 1.0, 1.0, n, s, o)};
         }},
        {"log_asymptotic", 2000, 1e-3,
         [](long n, uint64_t s, const McOptions& o, auto*) {
             return check_log_asymptotic(LaguerreModel(2, 2.0, diag({1, 1})), {1e4}, {0.5, 1.0}, n, s, o);
         }},
    };
}

int cmd_verify(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto defs = suite();
    std::vector<std::string> selected;
    if (f.has("check")) {
        std::stringstream ss(f.str("check"));
        for (std::string c; std::getline(ss, c, ',');) {
            if (std::none_of(defs.begin(), defs.end(), [&](const CheckDef& d) { return d.name == c; })) {
                std::string names;
                for (const auto& d : defs) names += (names.empty() ? "" : ", ") + d.name;
                throw ConfigError("--check: unknown check '" + c + "'; available: " + names);
            }
            selected.push_back(c);
        }
    }
    const long seed = f.integer("seed", 1);
    if (seed < 0) throw ConfigError("--seed must be >= 0");
    const int threads = static_cast<int>(f.integer("threads", 1));
    if (threads < 1) throw ConfigError("--threads must be >= 1");
    const long paths_override = f.integer("paths", 0);
    if (f.has("paths") && paths_override < 2) throw ConfigError("--paths must be >= 2");

    std::vector<McReport> reports;
    std::vector<DensityBin> bins;
    for (size_t k = 0; k < defs.size(); ++k) {
        const CheckDef& d = defs[k];
        if (!selected.empty() && std::find(selected.begin(), selected.end(), d.name) == selected.end()) continue;
        const long n = paths_override > 0 ? paths_override : d.paths;
        if (n < kMinPaths)
            err << "warning: " << d.name << " runs " << n << " paths, underpowered below " << kMinPaths << "\n";
        McOptions o;
        o.dt = f.has("dt") ? f.real("dt") : d.dt;
        o.threads = threads;
        for (auto& r : d.run(n, static_cast<uint64_t>(seed) + k, o, &bins)) reports.push_back(r);
    }
    const std::string report = reports_to_json(reports);
    out << report;
    if (f.has("out")) {
        fs::create_directories(f.str("out"));
        write_file((fs::path(f.str("out")) / "report.json").string(), report);
        if (!bins.empty()) {
            std::ostringstream os;
            write_density_csv(os, bins);
            write_file((fs::path(f.str("out")) / "eigen_density_bins.csv").string(), os.str());
        }
    }
    bool ok = true;
    for (const auto& r : reports) {
        if (r.gating && !r.pass) ok = false;
        err << (r.pass ? "PASS " : "FAIL ") << (r.gating ? "" : "(non-gating) ") << r.name << " z=" << format_double(r.z)
            << " " << r.note << "\n";
    }
    return ok ? 0 : 3;
}

// Reads key = value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> kv;
    int line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + " line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
            throw ConfigError(path + " line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        kv.emplace_back(key, value);
    }
    return kv;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        // config values go in front of the command-line flags they do not already set
        for (size_t i = 1; i < args.size(); ++i) {
            std::string path;
            if (args[i] == "--config" && i + 1 < args.size())
                path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0)
                path = args[i].substr(9);
            if (path.empty()) continue;
            std::vector<std::string> extra;
            for (const auto& [k, v] : read_config(path)) {
                const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                    return a == "--" + k || a.rfind("--" + k + "=", 0) == 0;
                });
                if (!given) extra.push_back("--" + k + "=" + v);
            }
            args.insert(args.begin() + static_cast<long>(i), extra.begin(), extra.end());
            break;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Laguerre process toolkit: simulation, closed-form laws, Monte Carlo verification"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    Flags flags;
    std::string config;
    auto add_common = [&](CLI::App* sub) {
        for (const auto& k : kKeys) sub->add_option("--" + k, flags.v[k]);
        sub->add_option("--config", config, "key = value file; flags override it");
    };
    CLI::App* sim = app.add_subcommand("simulate", "simulate paths to CSV");
    CLI::App* law = app.add_subcommand("law", "evaluate a closed-form law on a grid");
    law->add_option("name", flags.law, "laplace|density|qt|hw|t0|s0|detmoment")->required();
    CLI::App* ver = app.add_subcommand("verify", "run the Monte Carlo verification suite");
    CLI::App* hyp = app.add_subcommand("hypergeom", "matrix hypergeometric function: series and determinant");
    for (CLI::App* s : {sim, law, ver, hyp}) add_common(s);

    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return cmd_simulate(flags, out);
        if (law->parsed()) return cmd_law(flags, out);
        if (ver->parsed()) return cmd_verify(flags, out, err);
        return cmd_hypergeom(flags, out);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        err << "invalid input: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}
