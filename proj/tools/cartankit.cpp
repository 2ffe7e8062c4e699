// cartankit command line: classify, verify, project, sample, catalog

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cartankit/empirical.hpp"

using namespace cartankit;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

enum exit_code { ok = 0, internal = 1, bad_config = 2, not_valid = 3, mismatch = 4, nonstandard = 5 };

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct job {
    json raw;
    fs::path base; // directory of the config file
    group_spec g;
    std::vector<vec> basis;
    std::uint64_t seed = 1;
    std::size_t budget = 1000;
    double max_log_radius = 40.0;
    tolerances tol;
    fs::path out;
};

struct overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> budget;
    std::optional<double> radius;
    std::string out;
    std::string matrix;
    bool run = false;
};

double number(const json& j, const std::string& what) {
    if (!j.is_number()) throw config_error(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw config_error(what + " must be finite");
    return v;
}

vec numbers(const json& j, std::size_t len, const std::string& what) {
    if (!j.is_array()) throw config_error(what + " must be an array");
    if (j.size() != len)
        throw config_error(what + " has length " + std::to_string(j.size()) + ", expected " + std::to_string(len));
    vec v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number(j[i], what + "[" + std::to_string(i) + "]"));
    return v;
}

group_spec parse_group(const json& j) {
    if (!j.is_object() || !j.contains("kind")) throw config_error("group must be an object with a kind");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "SL3") return make_group(group_kind::sl3);
    if (kind == "SO2n") {
        if (!j.contains("n") || !j["n"].is_number_integer()) throw config_error("SO2n needs an integer n");
        const int n = j["n"].get<int>();
        if (n < 3 || n > 12) throw config_error("SO2n needs 3 <= n <= 12");
        return make_group(group_kind::so2n, n);
    }
    throw config_error("unknown group kind '" + kind + "' (SL3 or SO2n)");
}

// named coordinates: SO2n {t, phi, x, y, eta}, SL3 {d, u}; or a raw coordinate array
vec parse_element(const group_spec& g, const json& j, const std::string& what) {
    if (j.is_array()) return numbers(j, g.coord_dim, what);
    if (!j.is_object()) throw config_error(what + " must be an array or an object");
    for (const auto& [key, _] : j.items()) {
        static const std::vector<std::string> so_keys{"t", "phi", "x", "y", "eta"}, sl_keys{"d", "u"};
        const auto& keys = g.is_so2n() ? so_keys : sl_keys;
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw config_error(what + " has unknown coordinate '" + key + "'");
    }
    if (g.is_so2n()) {
        const vec t = j.contains("t") ? numbers(j["t"], 2, what + ".t") : vec(2, 0.0);
        const double phi = j.contains("phi") ? number(j["phi"], what + ".phi") : 0.0;
        const vec x = j.contains("x") ? numbers(j["x"], g.m(), what + ".x") : vec(g.m(), 0.0);
        const vec y = j.contains("y") ? numbers(j["y"], g.m(), what + ".y") : vec(g.m(), 0.0);
        const double eta = j.contains("eta") ? number(j["eta"], what + ".eta") : 0.0;
        return so2n_coord(g, t[0], t[1], phi, x, y, eta);
    }
    const vec d = j.contains("d") ? numbers(j["d"], 3, what + ".d") : vec(3, 0.0);
    const vec u = j.contains("u") ? numbers(j["u"], 3, what + ".u") : vec(3, 0.0);
    return sl3_coord(d[0], d[1], d[2], u[0], u[1], u[2]);
}

json load_json(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw config_error("cannot read " + p.string());
    try {
        json j = json::parse(in);
        // a report embeds the config it was produced from
        if (j.is_object() && j.contains("config") && j["config"].is_object()) return j["config"];
        return j;
    } catch (const json::exception& e) {
        throw config_error(p.string() + ": " + e.what());
    }
}

job load_job(const overrides& o, bool need_basis) {
    job jb;
    if (o.config.empty()) throw config_error("--config is required");
    jb.raw = load_json(o.config);
    jb.base = fs::path(o.config).parent_path();
    const json& j = jb.raw;
    if (!j.is_object()) throw config_error("config must be a JSON object");
    try {
        if (!j.contains("group")) throw config_error("config has no group");
        jb.g = parse_group(j["group"]);
        if (j.contains("seed")) jb.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("budget")) jb.budget = j["budget"].get<std::size_t>();
        if (j.contains("max_log_radius")) jb.max_log_radius = number(j["max_log_radius"], "max_log_radius");
        if (j.contains("tolerances")) {
            const json& t = j["tolerances"];
            if (t.contains("wall_tol")) jb.tol.wall_tol = number(t["wall_tol"], "tolerances.wall_tol");
            if (t.contains("q_tol")) jb.tol.q_tol = number(t["q_tol"], "tolerances.q_tol");
            if (t.contains("c_max")) jb.tol.c_max = number(t["c_max"], "tolerances.c_max");
            if (t.contains("wall_margin")) jb.tol.wall_margin = number(t["wall_margin"], "tolerances.wall_margin");
        }
        if (j.contains("output") && j["output"].contains("dir")) jb.out = jb.base / j["output"]["dir"].get<std::string>();
        if (j.contains("subalgebra")) {
            const json& s = j["subalgebra"];
            if (!s.contains("basis") || !s["basis"].is_array()) throw config_error("subalgebra.basis must be an array");
            for (std::size_t i = 0; i < s["basis"].size(); ++i)
                jb.basis.push_back(parse_element(jb.g, s["basis"][i], "subalgebra.basis[" + std::to_string(i) + "]"));
        }
    } catch (const json::exception& e) {
        throw config_error(e.what());
    }
    if (o.seed) jb.seed = *o.seed;
    if (o.budget) jb.budget = *o.budget;
    if (o.radius) jb.max_log_radius = *o.radius;
    if (!o.out.empty()) jb.out = o.out;
    if (need_basis && jb.basis.empty()) throw config_error("subalgebra.basis must be nonempty");
    if (!(jb.max_log_radius > 1.0)) throw config_error("max_log_radius must exceed 1");
    jb.raw["seed"] = jb.seed;
    jb.raw["budget"] = jb.budget;
    jb.raw["max_log_radius"] = jb.max_log_radius;
    return jb;
}

json rational_json(const rational& r) { return json::array({r.num, r.den}); }

json growth_json(const growth_fn& f) {
    return {{"p", rational_json(f.p)}, {"q", rational_json(f.q)}, {"text", f.str()}};
}

json shape_json(const mu_shape& s) {
    json j{{"kind", to_string(s.kind)}, {"text", s.str()}};
    switch (s.kind) {
    case shape_kind::full_chamber: break;
    case shape_kind::curve: j["growth"] = growth_json(s.lower); break;
    case shape_kind::band:
        j["lower"] = growth_json(s.lower);
        j["upper"] = growth_json(s.upper);
        break;
    case shape_kind::cone_region:
        j["slopes"] = {s.slope_lo, s.slope_hi};
        j["reflected"] = s.reflected;
        break;
    case shape_kind::ray:
        j["direction"] = s.direction;
        if (s.has_growth()) j["growth"] = growth_json(s.lower);
        break;
    case shape_kind::ray_pair:
        j["direction"] = s.direction;
        j["image"] = s.image;
        break;
    case shape_kind::log_curve:
        j["direction"] = s.direction;
        j["perpendicular"] = s.image;
        j["k"] = s.k;
        break;
    }
    return j;
}

growth_fn parse_growth(const json& j) {
    auto rat = [](const json& r) {
        if (r.is_array()) return rational(r.at(0).get<long>(), r.at(1).get<long>());
        return rational(r.get<long>(), 1);
    };
    return {rat(j.at("p")), j.contains("q") ? rat(j["q"]) : rational(0, 1)};
}

// expected Curve or Band given in a config
mu_shape parse_shape(const json& j) {
    try {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "Curve") return curve(parse_growth(j.at("growth")));
        if (kind == "Band") return band(parse_growth(j.at("lower")), parse_growth(j.at("upper")));
        if (kind == "FullChamber") return mu_shape{};
    } catch (const json::exception& e) {
        throw config_error(std::string("expect.shape: ") + e.what());
    }
    throw config_error("expect.shape.kind must be Curve, Band or FullChamber");
}

json verdict_json(const verdict& v) {
    json w = json::array();
    for (const auto& x : v.witnesses) w.push_back({{"condition", x.condition}, {"element", x.element}, {"root", x.root}});
    return {{"is_cds", v.is_cds},       {"rule", v.rule},     {"certainty", to_string(v.cert)},
            {"boundary", v.boundary},   {"shape", shape_json(v.shape)}, {"witnesses", w},
            {"standard_form", {{"kind", to_string(v.form.kind)}, {"basis", v.form.basis}}}};
}

json group_json(const group_spec& g) {
    json j{{"kind", to_string(g.kind)}, {"name", g.name()}};
    if (g.is_so2n()) j["n"] = g.n;
    return j;
}

void emit(const job& jb, const std::string& name, json report) {
    report["config"] = jb.raw;
    const std::string text = report.dump(2);
    std::cout << text << "\n";
    if (!jb.out.empty()) {
        fs::create_directories(jb.out);
        std::ofstream(jb.out / (name + ".json")) << text << "\n";
    }
}

void write_cloud(const job& jb, const mu_cloud& c) {
    if (jb.out.empty()) return;
    fs::create_directories(jb.out);
    std::ofstream os(jb.out / "cloud.csv");
    write_cloud_csv(os, c);
}

json cloud_summary(const mu_cloud& c) {
    return {{"samples", c.samples.size()}, {"skipped", c.skipped},           {"partial", c.partial},
            {"seed", c.seed},              {"budget", c.budget},              {"max_log_radius", c.max_log_radius},
            {"schedule", c.schedule},      {"min_logN1", c.samples.empty() ? 0.0 : c.min_radius()},
            {"max_logN1", c.samples.empty() ? 0.0 : c.max_radius()}};
}

json walls_json(const wall_result& w) {
    return {{"hit1", w.hit1},         {"hit2", w.hit2},           {"gap1", w.gap1}, {"gap2", w.gap2},
            {"ratio_inf", w.ratio_inf}, {"ratio_sup", w.ratio_sup}, {"top_count", w.top_count}};
}

int cmd_classify(const overrides& o) {
    const job jb = load_job(o, true);
    const verdict v = classify(jb.g, jb.basis);
    emit(jb, "classify", {{"command", "classify"}, {"group", group_json(jb.g)}, {"verdict", verdict_json(v)}});
    return ok;
}

// classifier against sample_cloud + two_wall_test + band_check
struct verify_outcome {
    json report;
    bool agree = true;
    bool exact = true;
};

verify_outcome verify_basis(const job& jb, const std::vector<vec>& basis, const json& expect, mu_cloud* keep) {
    verify_outcome out;
    const verdict v = classify(jb.g, basis);
    out.exact = v.cert == certainty::exact;
    const mu_cloud c = sample_cloud(jb.g, basis, jb.budget, jb.max_log_radius, jb.seed);
    const wall_result w = two_wall_test(c, jb.tol.wall_tol);
    const bool empirical_cds = basis.size() >= 2 && w.hit1 && w.hit2;
    json r{{"verdict", verdict_json(v)}, {"cloud", cloud_summary(c)}, {"walls", walls_json(w)},
           {"empirical_cds", empirical_cds}};
    std::vector<std::string> problems;
    bool expected_cds = v.is_cds;
    mu_shape shape = v.shape;
    if (expect.is_object()) {
        if (expect.contains("is_cds")) expected_cds = expect["is_cds"].get<bool>();
        if (expect.contains("shape")) shape = parse_shape(expect["shape"]);
    }
    if (expected_cds != v.is_cds) problems.push_back("classifier verdict differs from the expected one");
    if (empirical_cds != expected_cds) problems.push_back("two-wall test disagrees with the verdict");
    if (shape.kind != shape_kind::full_chamber) {
        const fit_report f = band_check(c, shape, jb.tol);
        json margins = json::array();
        bool margins_ok = true;
        for (const auto& m : wall_margins(c, shape, jb.tol)) {
            margins.push_back({{"k", m.k}, {"margin", m.margin}, {"predicted", m.predicted},
                               {"log_approach", m.log_approach}, {"ok", m.ok}});
            margins_ok = margins_ok && m.ok;
        }
        r["band"] = {{"shape", shape_json(shape)}, {"pass", f.pass},       {"C", f.c_estimate},
                     {"q_lower", f.q_lower},      {"q_upper", f.q_upper}, {"p_fit", f.p_fit},
                     {"k_fit", f.k_fit},          {"diagnostics", f.diagnostics}, {"wall_margins", margins}};
        if (!f.pass) problems.push_back("band check failed: " + f.diagnostics.front());
        if (!margins_ok) problems.push_back("a missing wall is approached too closely");
    }
    out.agree = problems.empty();
    r["agreement"] = out.agree;
    r["problems"] = problems;
    if (!out.agree && !out.exact) r["note"] = "probabilistic verdict; disagreement logged, not fatal";
    out.report = std::move(r);
    if (keep) *keep = c;
    return out;
}

int cmd_verify(const overrides& o) {
    const job jb = load_job(o, true);
    mu_cloud c;
    verify_outcome v = verify_basis(jb, jb.basis, jb.raw.value("expect", json()), &c);
    write_cloud(jb, c);
    json rep{{"command", "verify"}, {"group", group_json(jb.g)}};
    for (auto& [k, val] : v.report.items()) rep[k] = val;
    emit(jb, "verify", rep);
    return (!v.agree && v.exact) ? mismatch : ok;
}

mat read_matrix(const job& jb, const overrides& o) {
    json m;
    if (!o.matrix.empty() || jb.raw.contains("matrix_file")) {
        const fs::path p = !o.matrix.empty() ? fs::path(o.matrix) : jb.base / jb.raw["matrix_file"].get<std::string>();
        std::ifstream in(p);
        if (!in) throw config_error("cannot read matrix file " + p.string());
        std::stringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        const auto first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '[') {
            try {
                m = json::parse(text);
            } catch (const json::exception& e) {
                throw config_error(p.string() + ": " + e.what());
            }
        } else {
            // whitespace separated rows
            std::istringstream lines(text);
            std::string line;
            m = json::array();
            while (std::getline(lines, line)) {
                std::istringstream row(line);
                json r = json::array();
                double x;
                while (row >> x) r.push_back(x);
                if (!row.eof()) throw config_error(p.string() + ": non-numeric entry");
                if (!r.empty()) m.push_back(r);
            }
        }
    } else if (jb.raw.contains("matrix")) {
        m = jb.raw["matrix"];
    } else {
        throw config_error("project needs a matrix, matrix_file or --matrix");
    }
    if (!m.is_array() || m.size() != jb.g.d) throw config_error("matrix must have " + std::to_string(jb.g.d) + " rows");
    mat g(jb.g.d, jb.g.d);
    for (std::size_t i = 0; i < jb.g.d; ++i) {
        const vec row = numbers(m[i], jb.g.d, "matrix row " + std::to_string(i));
        for (std::size_t k = 0; k < jb.g.d; ++k) g(i, k) = row[k];
    }
    return g;
}

int cmd_project(const overrides& o) {
    const job jb = load_job(o, false);
    const mat g = read_matrix(jb, o);
    const membership_report mr = membership(jb.g, g);
    if (!mr.member) {
        std::cerr << "error: matrix is not in " << jb.g.name() << " (form residual " << mr.form_residual
                  << ", determinant residual " << mr.det_residual << ")\n";
        return not_valid;
    }
    const chamber_point p = cartan_projection_exact(jb.g, g);
    const auto [n1, n2] = cartan_projection_approx(jb.g, g);
    const vec& l = p.lambda;
    json walls;
    if (jb.g.is_so2n()) walls = {{"lambda1=lambda2", (l[0] - l[1]) / std::sqrt(2.0)}, {"lambda2=0", l[1]}};
    else walls = {{"lambda1=lambda2", (l[0] - l[1]) / std::sqrt(2.0)}, {"lambda2=lambda3", (l[1] - l[2]) / std::sqrt(2.0)}};
    emit(jb, "project",
         {{"command", "project"},
          {"group", group_json(jb.g)},
          {"lambda", l},
          {"logN1", std::log(n1)},
          {"logN2", std::log(n2)},
          {"wall_distance", walls},
          {"form_residual", mr.form_residual}});
    return ok;
}

int cmd_sample(const overrides& o) {
    const job jb = load_job(o, true);
    const mu_cloud c = sample_cloud(jb.g, jb.basis, jb.budget, jb.max_log_radius, jb.seed);
    write_cloud(jb, c);
    json rep{{"command", "sample"}, {"group", group_json(jb.g)}, {"cloud", cloud_summary(c)}};
    rep["bin_counts"] = c.bin_counts;
    if (!c.samples.empty() && c.max_radius() - c.min_radius() >= 4.0) rep["walls"] = walls_json(two_wall_test(c, jb.tol.wall_tol));
    if (jb.out.empty()) rep["note"] = "no --out given; cloud CSV not written";
    emit(jb, "sample", rep);
    return ok;
}

int cmd_catalog(const overrides& o) {
    const job jb = load_job(o, false);
    json rows = json::array();
    bool all_agree = true;
    for (const auto& e : catalog_minimal(jb.g)) {
        json row{{"name", e.name}, {"expected_cds", e.expected_cds}, {"metadata_only", e.metadata_only},
                 {"basis", e.basis}, {"note", e.note}};
        if (o.run && !e.metadata_only) {
            const auto v = verify_basis(jb, e.basis, json{{"is_cds", e.expected_cds}}, nullptr);
            row["verify"] = v.report;
            all_agree = all_agree && (v.agree || !v.exact);
        }
        rows.push_back(row);
    }
    emit(jb, "catalog", {{"command", "catalog"}, {"group", group_json(jb.g)}, {"entries", rows}, {"count", rows.size()}});
    return all_agree ? ok : mismatch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cartan-decomposition subgroups of SO(2,n) and SL(3,R)"};
    app.require_subcommand(1);
    overrides o;
    auto add_common = [&](CLI::App* sc) {
        sc->add_option("--config", o.config, "job config (JSON), or a report embedding one")->required();
        sc->add_option("--out", o.out, "output directory for reports and CSV");
    };
    auto add_sampling = [&](CLI::App* sc) {
        sc->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& v) { o.seed = v; }, "sampler seed");
        sc->add_option_function<std::size_t>("--budget", [&](const std::size_t& v) { o.budget = v; }, "draws per cloud");
        sc->add_option_function<double>("--max-log-radius", [&](const double& v) { o.radius = v; }, "largest log N1");
    };
    CLI::App* c_classify = app.add_subcommand("classify", "classify a subalgebra");
    CLI::App* c_verify = app.add_subcommand("verify", "classify and cross-check with a sampled mu-cloud");
    CLI::App* c_project = app.add_subcommand("project", "Cartan projection of a group element");
    CLI::App* c_sample = app.add_subcommand("sample", "sample a mu-cloud to CSV");
    CLI::App* c_catalog = app.add_subcommand("catalog", "list the minimal Cartan-decomposition subalgebras");
    for (auto* sc : {c_classify, c_verify, c_project, c_sample, c_catalog}) add_common(sc);
    for (auto* sc : {c_verify, c_sample, c_catalog}) add_sampling(sc);
    c_project->add_option("--matrix", o.matrix, "matrix file (JSON rows or whitespace separated)");
    c_catalog->add_flag("--run", o.run, "verify every entry");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : bad_config;
    }
    try {
        if (*c_classify) return cmd_classify(o);
        if (*c_verify) return cmd_verify(o);
        if (*c_project) return cmd_project(o);
        if (*c_sample) return cmd_sample(o);
        if (*c_catalog) return cmd_catalog(o);
    } catch (const config_error& e) {
        std::cerr << "error: invalid config: " << e.what() << "\n";
        return bad_config;
    } catch (const not_subalgebra_error& e) {
        std::cerr << "error: not a subalgebra: " << e.what() << "\n";
        return not_valid;
    } catch (const not_member_error& e) {
        std::cerr << "error: not a group member: " << e.what() << "\n";
        return not_valid;
    } catch (const nonstandard_error& e) {
        std::cerr << "error: no standard form: " << e.what() << " (defect " << e.defect() << ")\n";
        return nonstandard;
    } catch (const json::exception& e) {
        std::cerr << "error: invalid config: " << e.what() << "\n";
        return bad_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return internal;
    }
    return internal;
}
