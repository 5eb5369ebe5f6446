// gcore: command-line front end.  Every subcommand reads one job file,
// prints a JSON report on stdout and, with --out, writes the report and
// its figures/tables into a directory.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "gcore/config.hpp"
#include "gcore/report.hpp"

namespace fs = std::filesystem;
using namespace gcore;

namespace {

enum Exit : int { ok = 0, internal = 1, bad_config = 2, verification = 3, budget = 4, inconclusive = 5 };

struct Overrides {
    std::string config;
    std::string out;
    std::optional<int> power, levels;
    std::optional<long long> budget_points;
    std::optional<double> tol;
    std::string edge;
};

struct Outcome {
    Json results = Json::object();
    std::vector<std::string> warnings;
    std::map<std::string, std::string> files;  // artifact name -> contents
    int code = ok;
};

struct verification_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

JobConfig load(const Overrides& o) {
    JobConfig c = load_config(o.config);
    if (o.power) c.power = *o.power;
    if (o.levels) c.levels = *o.levels;
    if (o.budget_points) c.budget_points = *o.budget_points;
    if (o.tol) c.tolerance = *o.tol;
    if (!o.out.empty()) c.out = o.out;
    if (!o.edge.empty()) {
        Word w = parse_word(o.edge, c.rank);
        if (w.size() != 1 || w[0] < 0) throw config_error("--edge must be one generator name");
        c.edge = w[0];
    }
    if (c.power < 1) throw config_error("power must be at least 1");
    if (c.budget_points <= 0) throw config_error("budgets must be positive");
    if (c.tolerance <= 0) throw config_error("tolerance must be positive");
    return c;
}

Json echo(const JobConfig& c) {
    Json j;
    j["name"] = c.name;
    j["automorphism"] = to_json(c.phi);
    if (c.map) j["map"] = Json{{"images", word_list(c.map->map.images())}, {"conjugator", format_word(c.map->conjugator)}};
    if (c.inverse_map)
        j["inverse_map"] = Json{{"images", word_list(c.inverse_map->map.images())}, {"conjugator", format_word(c.inverse_map->conjugator)}};
    j["params"] = Json{{"power", c.power},         {"levels", c.levels},       {"edge", letter_name(c.edge)},
                       {"tolerance", c.tolerance}, {"budget_points", c.budget_points}, {"inp_budget", c.inp_budget},
                       {"period_bound", c.period_bound}, {"length_bound", c.length_bound}};
    return j;
}

Json map_summary(const RoseMap& s) {
    Json j;
    j["images"] = word_list(s.images());
    GateStructure g = gates(s);
    j["gates"] = to_json(g);
    TrainTrackCheck tt = is_train_track(s, g);
    j["train_track"] = tt.ok;
    if (!tt.ok)
        j["offending_turn"] = Json{{"edge", letter_name(tt.edge)}, {"position", tt.position},
                                   {"turn", {letter_name(tt.turn.first), letter_name(tt.turn.second)}}};
    TransitionData t = transition(s);
    j["transition"] = to_json(t);
    // necessary conditions for full irreducibility
    j["irreducible"] = t.irreducible;
    j["square_irreducible"] = matrix_irreducible(transition(s.power(2)).matrix);
    if (tt.ok && t.lambda > 1) {
        BccResult b = bcc(s, g, t);
        j["bcc"] = rounded(b.value);
        j["bcc_turn"] = {letter_name(b.germ1), letter_name(b.germ2)};
        j["critical_constant"] = rounded(critical_constant(b.value, t.lambda));
    }
    return j;
}

void require_train_track(const RoseMap& s, const char* what) {
    if (!is_train_track(s).ok) throw verification_failure(std::string(what) + " is not a train-track map");
}

InpSearch search(const JobConfig& c, const RoseMap& s) {
    require_train_track(s, "the map");
    GateStructure g = gates(s);
    TransitionData t = transition(s);
    if (!(t.lambda > 1)) throw verification_failure("expansion factor is 1; no Nielsen path search");
    int pb = c.period_bound ? c.period_bound : 2 * s.rank();
    Real lb = c.length_bound > 0 ? static_cast<Real>(c.length_bound) : 2 * critical_constant(bcc(s, g, t).value, t.lambda);
    InpSearch r = find_inps(s, pb, lb, c.inp_budget);
    for (auto& p : r.paths)
        if (!verify_nielsen(s, p)) throw verification_failure("Nielsen path " + format_word(p.as_path()) + " fails its fixed-path check");
    return r;
}

// ----------------------------------------------------------- subcommands

Outcome cmd_check_aut(const JobConfig& c) {
    Outcome o;
    o.results["automorphism"] = to_json(c.phi);
    o.results["inverse_verified"] = true;
    o.results["identity"] = c.phi.is_identity();
    if (c.map) o.results["map_conjugator"] = format_word(c.map->conjugator);
    return o;
}

Outcome cmd_expansion(const JobConfig& c) {
    Outcome o;
    RoseMap s = c.forward_map(), b = c.backward_map();
    TransitionData t = transition(s), tb = transition(b);
    o.results["lambda"] = rounded(t.lambda);
    o.results["mu"] = rounded(tb.lambda);
    o.results["forward"] = to_json(t);
    o.results["backward"] = to_json(tb);
    o.results["forward_train_track"] = is_train_track(s).ok;
    o.results["backward_train_track"] = is_train_track(b).ok;
    Json pw = Json::array();
    for (int n = 1; n <= 5; ++n) {
        Real ln = transition(s.power(n)).lambda, want = std::pow(t.lambda, static_cast<Real>(n));
        pw.push_back(Json{{"n", n}, {"lambda_power", rounded(ln)}, {"relative_error", rounded(std::fabs(ln - want) / want, 3)}});
    }
    o.results["power_check"] = pw;
    if (!t.irreducible) o.warnings.push_back("transition matrix of the map is reducible");
    else if (!matrix_irreducible(transition(s.power(2)).matrix)) o.warnings.push_back("transition matrix of the squared map is reducible");
    if (!is_train_track(s).ok) o.warnings.push_back("forward map is not train track; lambda is the matrix eigenvalue only");
    if (!is_train_track(b).ok) o.warnings.push_back("inverse map is not train track; mu is the matrix eigenvalue only");
    return o;
}

Outcome cmd_tt_check(const JobConfig& c) {
    Outcome o;
    o.results["forward"] = map_summary(c.forward_map());
    o.results["backward"] = map_summary(c.backward_map());
    return o;
}

Outcome cmd_inp(const JobConfig& c) {
    Outcome o;
    InpSearch r = search(c, c.forward_map());
    o.results = to_json(r);
    if (!r.complete) {
        o.warnings.push_back("Nielsen path search hit its node budget");
        if (r.paths.empty()) o.code = inconclusive;
    }
    return o;
}

Outcome cmd_classify(const JobConfig& c) {
    Outcome o;
    InpSearch r = search(c, c.forward_map());
    StableTree cls = classify_stable_tree(r);
    o.results["stable_tree"] = to_string(cls);
    o.results["orbits"] = r.orbits();
    o.results["paths"] = r.paths.size();
    o.results["complete"] = r.complete;
    RoseMap b = c.backward_map();
    if (is_train_track(b).ok && transition(b).lambda > 1) {
        InpSearch rb = search(c, b);
        o.results["inverse_stable_tree"] = to_string(classify_stable_tree(rb));
    } else {
        o.results["inverse_stable_tree"] = nullptr;
        o.warnings.push_back("inverse map is not train track; its stable tree is not classified");
    }
    if (cls == StableTree::inconclusive) {
        o.warnings.push_back("Nielsen path search hit its node budget");
        o.code = inconclusive;
    }
    return o;
}

Outcome cmd_ends_map(const JobConfig& c, bool from_points) {
    Outcome o;
    EndsMap f = from_points ? ends_map_from_sigma(c.phi) : ends_map_from(c.phi);
    f = power_ends(f, c.power);
    if (auto v = partition_check(f))
        throw verification_failure("ends map fails the partition check near " + (v->witness.empty() ? std::string("1") : format_word(v->witness)));
    o.results["route"] = from_points ? "points" : "automorphism";
    o.results["power"] = c.power;
    o.results["letter_images"] = to_json(f);
    o.results["partition_check"] = true;
    return o;
}

Outcome cmd_core(const JobConfig& c) {
    Outcome o;
    CoreSummary cs = intersection_number(c.phi, c.power);
    o.results = to_json(cs);
    o.warnings = cs.warnings;
    o.files["core.svg"] = render_core_svg(cs);
    o.files["slices.dot"] = slices_dot(cs);
    return o;
}

Outcome cmd_preimages(const JobConfig& c) {
    Outcome o;
    Automorphism phi = c.forward_aut();
    require_train_track(RoseMap::of(phi), "the map");
    LiftedMap f(phi);
    PreimageLevels lv = preimage_levels(f, c.edge, c.levels, static_cast<std::size_t>(c.budget_points), static_cast<Real>(c.tolerance));
    auto len = [&](Letter x) { return f.length(x); };
    std::vector<Real> vols;
    Json levels = Json::array();
    for (int n = 0; n <= lv.top(); ++n) {
        vols.push_back(shape_volume(span_shape(points_of(lv, n), len)));
        levels.push_back(Json{{"n", n}, {"count", lv.size(n)}, {"predicted", lv.predicted[static_cast<std::size_t>(n)]},
                              {"volume", rounded(vols.back())}});
    }
    o.results["edge"] = letter_name(c.edge);
    o.results["start_offset"] = rounded(lv.start_offset);
    o.results["restarts"] = lv.restarts;
    o.results["levels"] = levels;
    std::vector<int> grid;
    for (int i = 1; i <= lv.top(); ++i) grid.push_back(i);
    o.results["span"] = to_json(span_stats(f, lv, lv.top(), grid, 1));
    auto pts = points_of(lv, lv.top());
    SpanGraph g = span_graph(pts, len);
    o.results["span"]["steiner_vertices"] = g.steiner;
    if (pts.size() <= 2000) {
        Json a = Json::array();
        for (auto& p : pts) a.push_back(to_json(p));
        o.results["top_points"] = a;
    }
    o.files["levels.csv"] = levels_csv(lv, vols);
    o.files["span.svg"] = render_span_svg(g, "span of S_" + std::to_string(lv.top()) + " for edge " + letter_name(c.edge));
    return o;
}

Outcome cmd_growth(const JobConfig& c) {
    Outcome o;
    Automorphism phi = c.forward_aut();
    RoseMap s = RoseMap::of(phi);
    require_train_track(s, "the map");
    GrowthOptions opt;
    opt.budget = static_cast<std::size_t>(c.budget_points);
    opt.tol = static_cast<Real>(c.tolerance);
    opt.inverse_map = c.backward_map();
    opt.inps = search(c, s);
    GrowthReport g = growth_report(phi, c.edge, c.levels, opt);
    o.results = to_json(g);
    o.warnings = g.warnings;
    if (!opt.inps->complete) o.warnings.push_back("Nielsen path search hit its node budget");
    o.files["growth.csv"] = growth_csv(g);
    LiftedMap f(phi);
    auto len = [&](Letter x) { return f.length(x); };
    auto pts = points_of(preimage_levels(f, c.edge, c.levels, opt.budget, opt.tol), c.levels);
    o.files["span.svg"] = render_span_svg(span_graph(pts, len), "span of S_" + std::to_string(c.levels) + " for edge " + letter_name(c.edge));
    return o;
}

Outcome cmd_symmetry(const JobConfig& c) {
    Outcome o;
    Json rows = Json::array();
    bool all = true;
    for (int n = 1; n <= c.power; ++n) {
        SymmetryReport r = symmetry_check(c.phi, n);
        rows.push_back(Json{{"n", n}, {"forward", r.forward}, {"backward", r.backward}, {"equal", r.equal()}});
        all = all && r.equal();
    }
    o.results["rows"] = rows;
    o.results["equal"] = all;
    if (!all) o.code = verification;
    return o;
}

int emit(const std::string& command, const JobConfig& c, Outcome o) {
    Json rep;
    rep["schema"] = report_schema;
    rep["command"] = command;
    rep["config"] = echo(c);
    rep["results"] = std::move(o.results);
    rep["warnings"] = o.warnings;
    rep["exit_code"] = o.code;
    const std::string text = rep.dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        std::ofstream(fs::path(c.out) / (command + ".json"), std::ios::binary) << text;
        for (auto& [name, body] : o.files) std::ofstream(fs::path(c.out) / name, std::ios::binary) << body;
    }
    for (auto& w : o.warnings) std::cerr << "warning: " << w << "\n";
    return o.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"free group automorphisms: ends maps, cores, train tracks and preimage growth"};
    app.require_subcommand(1);
    Overrides ov;
    bool from_points = false;

    const std::vector<std::pair<std::string, std::string>> commands = {
        {"check-aut", "verify the automorphism and its inverse"},
        {"expansion", "expansion factors of the map and its inverse"},
        {"tt-check", "gates, train-track property and cancellation bounds"},
        {"inp", "search for indivisible periodic Nielsen paths"},
        {"classify", "geometric or nongeometric stable tree"},
        {"ends-map", "induced map on boundary cylinders"},
        {"core", "intersection number i(T, T.phi^n) and the core slices"},
        {"preimages", "iterated preimages of an edge midpoint"},
        {"growth", "volume growth of the preimage trees"},
        {"symmetry", "compare i(T, T.phi^n) with i(T, T.phi^-n)"},
    };
    for (auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("config", ov.config, "job file (TOML)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", ov.out, "directory for the report and artifacts");
        sub->add_option("--power", ov.power, "power n of the automorphism");
        sub->add_option("--levels", ov.levels, "number of preimage levels");
        sub->add_option("--budget-points", ov.budget_points, "maximum points per preimage level");
        sub->add_option("--tol", ov.tol, "tolerance for floating checks");
        sub->add_option("--edge", ov.edge, "edge whose midpoint is pulled back");
        if (name == "ends-map") sub->add_flag("--from-points", from_points, "build the map from the points of the automorphism");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : bad_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    JobConfig cfg;
    try {
        cfg = load(ov);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return bad_config;
    }
    try {
        Outcome o;
        if (command == "check-aut") o = cmd_check_aut(cfg);
        else if (command == "expansion") o = cmd_expansion(cfg);
        else if (command == "tt-check") o = cmd_tt_check(cfg);
        else if (command == "inp") o = cmd_inp(cfg);
        else if (command == "classify") o = cmd_classify(cfg);
        else if (command == "ends-map") o = cmd_ends_map(cfg, from_points);
        else if (command == "core") o = cmd_core(cfg);
        else if (command == "preimages") o = cmd_preimages(cfg);
        else if (command == "growth") o = cmd_growth(cfg);
        else o = cmd_symmetry(cfg);
        return emit(command, cfg, std::move(o));
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return budget;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return bad_config;
    } catch (const verification_failure& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return verification;
    } catch (const core_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return verification;
    } catch (const dynamics_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return verification;
    } catch (const graph_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return verification;
    } catch (const word_error& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return verification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return internal;
    }
}
