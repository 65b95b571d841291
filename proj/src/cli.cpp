#include "mcalc/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcalc/calculus.hpp"
#include "mcalc/errors.hpp"
#include "mcalc/report.hpp"
#include "mcalc/suites.hpp"

namespace mcalc {

namespace {

using nlohmann::json;

// One merged scenario: the config document and the flags fill the same
// fields, flags winning.  verify consumes the suite-related fields, compute
// the query fields; both share manifold/fd/flow/output settings.
struct Scenario {
    // shared
    std::vector<std::string> manifolds;  // roster for verify; compute uses entry 0
    std::uint64_t seed = 42;
    double tol = 0.0;  // > 0 overrides every per-check tolerance
    std::string out;   // empty = stdout
    std::string format = "json";
    FDConfig fd;
    FlowConfig flow;
    // verify
    std::vector<std::string> suites;
    // compute query
    std::string kind;
    json functional;  // catalog name (string) or cylindrical spec (object)
    json measure;     // {"atoms": [[w,x...],...]} or {"file": path}
    json measure2;    // second measure for the metric kinds
    json field;       // {"kind": zero|constant|linear, ...}
    std::vector<double> at;
    bool have_at = false;
    double p = 2.0;
};

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                known = true;
                break;
            }
        if (!known) throw input_error("config: unknown key '" + it.key() + "' in " + where);
    }
}

double number_at(const json& j, const char* key, const std::string& where) {
    if (!j.at(key).is_number()) throw input_error("config: " + where + "." + key + " must be a number");
    return j.at(key).get<double>();
}

void apply_fd_config(const json& j, FDConfig& fd) {
    require_keys(j, {"step0", "levels", "richardson_order", "tol", "spread_threshold", "grad_step",
                     "grad_richardson"},
                 "fd");
    if (j.contains("step0")) fd.step0 = number_at(j, "step0", "fd");
    if (j.contains("levels")) fd.levels = static_cast<int>(number_at(j, "levels", "fd"));
    if (j.contains("richardson_order"))
        fd.richardson_order = static_cast<int>(number_at(j, "richardson_order", "fd"));
    if (j.contains("tol")) fd.tol = number_at(j, "tol", "fd");
    if (j.contains("spread_threshold")) fd.spread_threshold = number_at(j, "spread_threshold", "fd");
    if (j.contains("grad_step")) fd.grad_step = number_at(j, "grad_step", "fd");
    if (j.contains("grad_richardson")) {
        if (!j.at("grad_richardson").is_boolean())
            throw input_error("config: fd.grad_richardson must be a boolean");
        fd.grad_richardson = j.at("grad_richardson").get<bool>();
    }
}

void apply_flow_config(const json& j, FlowConfig& flow) {
    require_keys(j, {"substeps_per_unit"}, "flow");
    if (j.contains("substeps_per_unit"))
        flow.substeps_per_unit = static_cast<int>(number_at(j, "substeps_per_unit", "flow"));
}

void apply_config_file(const std::string& path, Scenario& sc) {
    std::ifstream in(path);
    if (!in) throw input_error("config: cannot read '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("config: '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw input_error("config: top level must be a JSON object");
    require_keys(j,
                 {"suites", "manifolds", "manifold", "seed", "tol", "out", "format", "fd", "flow",
                  "kind", "functional", "measure", "measure2", "field", "at", "p"},
                 "top level");

    if (j.contains("suites")) sc.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("manifolds")) sc.manifolds = j.at("manifolds").get<std::vector<std::string>>();
    if (j.contains("manifold")) sc.manifolds = {j.at("manifold").get<std::string>()};
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw input_error("config: seed must be a nonnegative integer");
        sc.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("tol")) sc.tol = number_at(j, "tol", "top level");
    if (j.contains("out")) sc.out = j.at("out").get<std::string>();
    if (j.contains("format")) sc.format = j.at("format").get<std::string>();
    if (j.contains("fd")) apply_fd_config(j.at("fd"), sc.fd);
    if (j.contains("flow")) apply_flow_config(j.at("flow"), sc.flow);
    if (j.contains("kind")) sc.kind = j.at("kind").get<std::string>();
    if (j.contains("functional")) sc.functional = j.at("functional");
    if (j.contains("measure")) sc.measure = j.at("measure");
    if (j.contains("measure2")) sc.measure2 = j.at("measure2");
    if (j.contains("field")) sc.field = j.at("field");
    if (j.contains("at")) {
        sc.at = j.at("at").get<std::vector<double>>();
        sc.have_at = true;
    }
    if (j.contains("p")) sc.p = number_at(j, "p", "top level");
}

Manifold parse_manifold(const std::string& desc) {
    auto colon = desc.find(':');
    if (colon == std::string::npos)
        throw input_error("manifold '" + desc + "': expected kind:dim, e.g. euclidean:2 or sphere:3");
    std::string kind = desc.substr(0, colon);
    int dim = 0;
    try {
        std::size_t used = 0;
        dim = std::stoi(desc.substr(colon + 1), &used);
        if (used != desc.size() - colon - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw input_error("manifold '" + desc + "': dimension must be an integer");
    }
    if (kind == "euclidean") return Manifold::euclidean(dim);
    if (kind == "sphere") return Manifold::sphere(dim);
    throw input_error("manifold '" + desc + "': unknown kind '" + kind + "'");
}

ReportFormat parse_format(const std::string& f) {
    if (f == "json") return ReportFormat::Json;
    if (f == "csv") return ReportFormat::Csv;
    throw input_error("format '" + f + "': expected json or csv");
}

std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw input_error(what + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw input_error(what + ": empty coordinate list");
    return out;
}

ParticleMeasure measure_from_json(const Manifold& m, const json& spec, const std::string& where) {
    if (!spec.is_object())
        throw input_error("config: " + where + " must be an object with 'atoms' or 'file'");
    require_keys(spec, {"atoms", "file"}, where);
    if (spec.contains("file") == spec.contains("atoms"))
        throw input_error("config: " + where + " needs exactly one of 'atoms' and 'file'");
    if (spec.contains("file")) return load_measure(m, spec.at("file").get<std::string>());
    std::vector<Atom> atoms;
    for (const auto& row : spec.at("atoms")) {
        if (!row.is_array() || static_cast<int>(row.size()) != m.ambient_dim() + 1)
            throw input_error("config: " + where + " atoms rows must be [weight, x_1..x_" +
                              std::to_string(m.ambient_dim()) + "]");
        std::vector<double> coords;
        for (std::size_t i = 1; i < row.size(); ++i) coords.push_back(row[i].get<double>());
        atoms.push_back(Atom{row[0].get<double>(), Point{std::move(coords)}});
    }
    return ParticleMeasure(m, std::move(atoms));
}

ScalarField inner_from_json(const Manifold& m, const json& spec) {
    if (!spec.is_object()) throw input_error("config: functional.inner entries must be objects");
    require_keys(spec, {"kind", "axis", "k"}, "functional.inner");
    std::string kind = spec.at("kind").get<std::string>();
    if (kind == "coordinate") {
        if (!spec.contains("axis")) throw input_error("config: coordinate inner field needs 'axis'");
        return coordinate_field(m, static_cast<int>(number_at(spec, "axis", "functional.inner")));
    }
    if (kind == "distance_power") {
        if (!spec.contains("k")) throw input_error("config: distance_power inner field needs 'k'");
        return dist_origin_power(m, number_at(spec, "k", "functional.inner"));
    }
    throw input_error("config: unknown inner field kind '" + kind + "'");
}

Functional functional_from_json(const Manifold& m, const json& spec) {
    if (spec.is_null()) throw input_error("config: compute needs a functional");
    if (spec.is_string()) return builtin_functional(m, spec.get<std::string>());
    if (!spec.is_object())
        throw input_error("config: functional must be a catalog name or a cylindrical spec");
    require_keys(spec, {"name", "outer", "coeffs", "inner"}, "functional");
    std::string outer = spec.at("outer").get<std::string>();
    std::vector<ScalarField> inner;
    bool all_coordinates = true;
    for (const auto& f : spec.at("inner")) {
        inner.push_back(inner_from_json(m, f));
        if (!(f.is_object() && f.contains("kind") && f.at("kind") == "coordinate"))
            all_coordinates = false;
    }
    if (inner.empty()) throw input_error("config: functional needs at least one inner field");
    std::vector<double> coeffs;
    if (spec.contains("coeffs")) coeffs = spec.at("coeffs").get<std::vector<double>>();

    const std::size_t n = inner.size();
    CylindricalSpec cyl;
    cyl.name = spec.contains("name") ? spec.at("name").get<std::string>() : outer;
    cyl.inner = std::move(inner);
    cyl.bounded_inner_gradients = all_coordinates || m.kind() == ManifoldKind::Sphere;
    if (outer == "linear" || outer == "square") {
        if (coeffs.size() != n + 1)
            throw input_error("config: outer '" + outer + "' over " + std::to_string(n) +
                              " fields needs " + std::to_string(n + 1) + " coeffs (c0 first)");
        bool squared = outer == "square";
        cyl.outer = [coeffs, n, squared](const std::vector<double>& t) {
            double u = coeffs[0];
            for (std::size_t i = 0; i < n; ++i) u += coeffs[i + 1] * t[i];
            return squared ? u * u : u;
        };
        cyl.outer_grad = [coeffs, n, squared](const std::vector<double>& t) {
            double u = coeffs[0];
            for (std::size_t i = 0; i < n; ++i) u += coeffs[i + 1] * t[i];
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) g[i] = squared ? 2.0 * u * coeffs[i + 1] : coeffs[i + 1];
            return g;
        };
    } else if (outer == "product") {
        double scale = 1.0;
        if (!coeffs.empty()) {
            if (coeffs.size() != 1)
                throw input_error("config: outer 'product' takes a single scale coefficient");
            scale = coeffs[0];
        }
        cyl.outer = [scale, n](const std::vector<double>& t) {
            double u = scale;
            for (std::size_t i = 0; i < n; ++i) u *= t[i];
            return u;
        };
        cyl.outer_grad = [scale, n](const std::vector<double>& t) {
            std::vector<double> g(n);
            for (std::size_t i = 0; i < n; ++i) {
                double u = scale;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) u *= t[j];
                g[i] = u;
            }
            return g;
        };
    } else {
        throw input_error("config: unknown outer map '" + outer + "'");
    }
    return make_cylindrical(cyl);
}

VectorField field_from_json(const Manifold& m, const json& spec) {
    if (spec.is_null()) throw input_error("config: this derivative kind needs a field");
    if (!spec.is_object()) throw input_error("config: field must be an object with a 'kind'");
    require_keys(spec, {"kind", "components", "matrix", "offset"}, "field");
    std::string kind = spec.at("kind").get<std::string>();
    const int d = m.ambient_dim();
    Manifold mf = m;
    VectorField v;
    v.compact_support = true;  // scenario author's declaration; see README
    if (kind == "zero") {
        v.at = [mf](const Point& p) { return mf.zero_tangent(p); };
        return v;
    }
    if (kind == "constant") {
        auto c = spec.at("components").get<std::vector<double>>();
        if (static_cast<int>(c.size()) != d)
            throw input_error("config: field.components must have " + std::to_string(d) + " entries");
        v.at = [mf, c](const Point& p) { return mf.project_tangent(p, c); };
        return v;
    }
    if (kind == "linear") {
        auto rows = spec.at("matrix").get<std::vector<std::vector<double>>>();
        std::vector<double> b(d, 0.0);
        if (spec.contains("offset")) b = spec.at("offset").get<std::vector<double>>();
        if (static_cast<int>(rows.size()) != d || static_cast<int>(b.size()) != d)
            throw input_error("config: field.matrix must be " + std::to_string(d) + "x" +
                              std::to_string(d) + " and offset length " + std::to_string(d));
        for (const auto& r : rows)
            if (static_cast<int>(r.size()) != d)
                throw input_error("config: field.matrix rows must have " + std::to_string(d) +
                                  " entries");
        v.at = [mf, rows, b, d](const Point& p) {
            std::vector<double> out = b;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) out[i] += rows[i][j] * p.coords[j];
            return mf.project_tangent(p, out);
        };
        return v;
    }
    throw input_error("config: unknown field kind '" + kind + "'");
}

void write_text(const std::string& path, const std::string& body) {
    if (path.empty()) {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot open '" + path + "' for writing");
    out << body;
    out.flush();
    if (!out) throw input_error("failed writing '" + path + "'");
}

// -- verify ------------------------------------------------------------------

int run_verify(const Scenario& sc) {
    SuiteOptions opts;
    opts.seed = sc.seed;
    opts.fd = sc.fd;
    opts.flow = sc.flow;
    opts.tol_override = sc.tol;
    for (const auto& desc : sc.manifolds) opts.manifolds.push_back(parse_manifold(desc));
    ReportFormat format = parse_format(sc.format);

    std::vector<std::string> names = sc.suites.empty() ? std::vector<std::string>{"all"} : sc.suites;
    auto reports = run_suites(names, opts);

    RunMetadata meta;
    meta.seed = sc.seed;
    meta.suites = names;
    if (sc.manifolds.empty())
        meta.manifolds = {"euclidean:1", "euclidean:2", "sphere:3"};
    else
        meta.manifolds = sc.manifolds;

    emit_report(reports, meta, sc.out, format);

    std::size_t failed = 0;
    for (const auto& r : reports) failed += r.pass ? 0 : 1;
    std::cerr << "verify: " << reports.size() << " checks, " << reports.size() - failed
              << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

// -- compute -----------------------------------------------------------------

json estimate_to_json(const char* kind, const DerivativeEstimate& est) {
    json out;
    out["kind"] = kind;
    out["value"] = est.value;
    out["converged"] = est.converged;
    out["spread"] = est.spread;
    out["oscillating"] = est.oscillating;
    out["ladder"] = est.ladder;
    return out;
}

json tangent_to_json(const char* kind, const TangentVector& v) {
    json out;
    out["kind"] = kind;
    out["base"] = v.base.coords;
    out["value"] = v.components;
    return out;
}

std::string compute_csv(const json& result) {
    std::string out = "kind,component,value,converged,spread,oscillating\n";
    std::string kind = result.at("kind").get<std::string>();
    auto flag = [&result](const char* key) -> std::string {
        if (!result.contains(key)) return "";
        return result.at(key).get<bool>() ? "true" : "false";
    };
    std::string spread = result.contains("spread") ? format_g17(result.at("spread").get<double>()) : "";
    if (result.at("value").is_array()) {
        const auto& vals = result.at("value");
        for (std::size_t i = 0; i < vals.size(); ++i)
            out += kind + "," + std::to_string(i) + "," + format_g17(vals[i].get<double>()) + ",,,\n";
    } else {
        out += kind + ",0," + format_g17(result.at("value").get<double>()) + "," + flag("converged") +
               "," + spread + "," + flag("oscillating") + "\n";
    }
    return out;
}

int run_compute(const Scenario& sc) {
    static const std::vector<std::string> kinds = {"extrinsic",     "centered", "grad_extrinsic",
                                                   "intrinsic",     "l_field",  "l_directional",
                                                   "wasserstein"};
    if (std::find(kinds.begin(), kinds.end(), sc.kind) == kinds.end())
        throw input_error("compute: unknown kind '" + sc.kind +
                          "' (expected extrinsic, centered, grad_extrinsic, intrinsic, "
                          "l_directional, l_field or wasserstein)");
    if (sc.manifolds.size() > 1) throw input_error("compute: give a single manifold");
    Manifold m = parse_manifold(sc.manifolds.empty() ? "euclidean:1" : sc.manifolds[0]);
    ReportFormat format = parse_format(sc.format);
    sc.fd.validate();
    sc.flow.validate();

    if (sc.measure.is_null()) throw input_error("compute: needs a measure");
    ParticleMeasure eta = measure_from_json(m, sc.measure, "measure");

    auto need_point = [&]() {
        if (!sc.have_at) throw input_error("compute: kind '" + sc.kind + "' needs a point (--at)");
        Point x{sc.at};
        m.check_point(x);
        return x;
    };

    json result;
    if (sc.kind == "wasserstein") {
        if (sc.measure2.is_null()) throw input_error("compute: wasserstein needs measure2");
        ParticleMeasure nu = measure_from_json(m, sc.measure2, "measure2");
        result["kind"] = "wasserstein";
        result["p"] = sc.p;
        result["value"] = wasserstein_p(eta, nu, sc.p);
    } else if (sc.kind == "extrinsic") {
        result = estimate_to_json("extrinsic",
                                  extrinsic_fd(functional_from_json(m, sc.functional), eta,
                                               need_point(), sc.fd));
    } else if (sc.kind == "centered") {
        result = estimate_to_json("centered",
                                  centered_extrinsic_fd(functional_from_json(m, sc.functional), eta,
                                                        need_point(), sc.fd));
    } else if (sc.kind == "grad_extrinsic") {
        result = tangent_to_json("grad_extrinsic",
                                 grad_extrinsic(functional_from_json(m, sc.functional), eta,
                                                need_point(), sc.fd));
    } else if (sc.kind == "l_field") {
        result = tangent_to_json("l_field",
                                 l_field_via_dirac(functional_from_json(m, sc.functional), eta,
                                                   need_point(), sc.fd));
    } else if (sc.kind == "intrinsic") {
        result = estimate_to_json("intrinsic",
                                  intrinsic_directional(functional_from_json(m, sc.functional), eta,
                                                        field_from_json(m, sc.field), sc.fd,
                                                        sc.flow));
    } else {  // l_directional
        result = estimate_to_json("l_directional",
                                  l_directional(functional_from_json(m, sc.functional), eta,
                                                field_from_json(m, sc.field), sc.fd));
    }

    std::string body =
        format == ReportFormat::Json ? result.dump(2) + "\n" : compute_csv(result);
    write_text(sc.out, body);
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"numerical calculus for finite particle measures"};
    app.require_subcommand(1);

    std::string config_path, field_spec, at_spec, functional_name, measure_path, measure2_path;
    std::vector<std::string> suites, manifolds;
    std::uint64_t seed = 42;
    double tol = 0.0, p = 2.0;
    std::string out, format, kind;

    CLI::App* verify = app.add_subcommand("verify", "run identity verification suites");
    verify->add_option("--suite", suites, "suite name (repeatable); 'all' expands to every suite");
    verify->add_option("--manifold", manifolds, "manifold descriptor kind:dim (repeatable)");
    verify->add_option("--config", config_path, "JSON scenario file; flags override its fields");
    verify->add_option("--seed", seed, "root seed for instance generation");
    verify->add_option("--out", out, "report path (default: stdout)");
    verify->add_option("--format", format, "report format: json or csv");
    verify->add_option("--tol", tol, "override every per-check tolerance");

    CLI::App* compute = app.add_subcommand("compute", "evaluate one derivative or metric");
    compute->add_option("--kind", kind,
                        "extrinsic | centered | grad_extrinsic | intrinsic | l_directional | "
                        "l_field | wasserstein");
    compute->add_option("--manifold", manifolds, "manifold descriptor kind:dim");
    compute->add_option("--config", config_path, "JSON scenario file; flags override its fields");
    compute->add_option("--functional", functional_name, "catalog functional name");
    compute->add_option("--measure", measure_path, "measure file (one 'weight x_1 .. x_d' per line)");
    compute->add_option("--measure2", measure2_path, "second measure file (wasserstein)");
    compute->add_option("--at", at_spec, "point, comma-separated coordinates");
    compute->add_option("--field", field_spec, "zero | constant:c_1,..,c_d");
    compute->add_option("--p", p, "wasserstein order (default 2)");
    compute->add_option("--out", out, "output path (default: stdout)");
    compute->add_option("--format", format, "output format: json or csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        Scenario sc;
        if (!config_path.empty()) apply_config_file(config_path, sc);
        // flags override the config document
        CLI::App* verb = verify->parsed() ? verify : compute;
        auto given = [verb](const char* name) {
            const CLI::Option* opt = verb->get_option_no_throw(name);
            return opt != nullptr && opt->count() > 0;
        };
        if (!suites.empty()) sc.suites = suites;
        if (!manifolds.empty()) sc.manifolds = manifolds;
        if (given("--seed")) sc.seed = seed;
        if (given("--tol")) sc.tol = tol;
        if (given("--out")) sc.out = out;
        if (given("--format")) sc.format = format;
        if (given("--kind")) sc.kind = kind;
        if (given("--functional")) sc.functional = functional_name;
        if (given("--measure")) sc.measure = json{{"file", measure_path}};
        if (given("--measure2")) sc.measure2 = json{{"file", measure2_path}};
        if (given("--p")) sc.p = p;
        if (given("--at")) {
            sc.at = parse_number_list(at_spec, "--at");
            sc.have_at = true;
        }
        if (given("--field")) {
            if (field_spec == "zero") {
                sc.field = json{{"kind", "zero"}};
            } else if (field_spec.rfind("constant:", 0) == 0) {
                sc.field = json{{"kind", "constant"},
                                {"components", parse_number_list(field_spec.substr(9), "--field")}};
            } else {
                throw input_error("--field: expected 'zero' or 'constant:c_1,..,c_d'");
            }
        }
        return verify->parsed() ? run_verify(sc) : run_compute(sc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace mcalc
