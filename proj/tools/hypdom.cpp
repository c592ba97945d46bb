#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <hypdom/brackets.hpp>
#include <hypdom/heptagrid.hpp>
#include <hypdom/hyperlift.hpp>
#include <hypdom/interwoven.hpp>
#include <hypdom/isocline.hpp>
#include <hypdom/mantilla.hpp>
#include <hypdom/render.hpp>
#include <hypdom/turing.hpp>
#include <hypdom/wang.hpp>

using nlohmann::json;
using namespace hypdom;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2;
constexpr const char* kOutDirVar = "HYPDOM_OUT_DIR";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

json read_json(const std::string& path) {
    try {
        return json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw UsageError(path + ": not JSON (" + e.what() + ")");
    }
}

// relative paths land in $HYPDOM_OUT_DIR when it is set
void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        return;
    }
    fs::path p(out);
    if (p.is_relative())
        if (const char* dir = std::getenv(kOutDirVar); dir && *dir) p = fs::path(dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot write " + p.string());
    f << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json violations(const std::vector<mantilla::Violation>& v) {
    json a = json::array();
    for (auto& x : v) a.push_back({{"addr", to_json(x.addr)}, {"what", x.what}});
    return a;
}

json strings(const std::vector<std::string>& v) { return json(v); }

unsigned available(const render::DiscScene& s) {
    using namespace render;
    unsigned l = Tiles;
    if (s.mantilla) l |= Kinds | Trees | Seeds;
    if (s.isoclines) l |= Isoclines;
    if (s.hyper) l |= Scent | Legs;
    if (s.signals) l |= Signals | Joins;
    return l;
}

render::RenderSpec spec_for(render::Target t, const std::string& layers, unsigned avail, double size) {
    render::RenderSpec s;
    s.target = t;
    s.size = size;
    s.overlays = layers == "auto" ? avail : render::parse_layers(layers);
    if (layers != "auto" && s.overlays == ~0u) s.overlays = avail;
    return s;
}

turing::TuringMachine load_machine(const std::string& src) {
    if (src.rfind("corpus:", 0) == 0) {
        auto name = src.substr(7);
        for (auto& m : turing::deskCorpus())
            if (m.name == name) return m.tm;
        throw UsageError("no corpus machine named '" + name + "'");
    }
    try {
        return turing::parseMachine(read_text(src));
    } catch (const turing::TuringError& e) {
        throw UsageError(src + ": " + e.what());
    }
}

hyperlift::HyperConfig build_hyper(const mantilla::MantillaMap& m, int depth, std::uint64_t seed) {
    auto im = hyperlift::anchoredMap(m);
    auto hc = hyperlift::propagateScent(hyperlift::activateSeeds(im));
    return hyperlift::buildGenerations(hc, brackets::coin_oracle(seed), depth);
}

json hyper_document(const json& mantillaDoc, int depth, std::uint64_t seed, const hyperlift::HyperConfig& hc) {
    return {{"input", {{"mantilla", mantillaDoc}, {"depth", depth}, {"seed", seed}}}, {"hyper", hyperlift::to_json(hc)}};
}

interwoven::TrilateralConfig lift(const brackets::BracketModel& m, int scale, const std::vector<int>& cuts) {
    return cuts.empty() ? interwoven::liftConfig(m, scale) : interwoven::liftStrip(m, scale, cuts);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale laboratory for the hyperbolic domino problem construction", "hypdom"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "json", out;
    app.add_option("--format", format, "json or svg")->check(CLI::IsMember({"json", "svg"}));
    app.add_option("--out", out, "output file; relative paths go under $HYPDOM_OUT_DIR when set");

    std::string file = "-", layers = "auto";
    std::uint64_t seed = 0;
    int radius = 4, length = 64, gens = 4, at = 0, scale = 2, depth = 1, anchorValue = 0;
    int steps = 50, window = 41, width = 0, height = 0, generation = 5, kMax = 3, pMax = 4, models = 24;
    double size = 800;
    std::vector<int> choices, cuts;
    auto input = [&](CLI::App* c, const char* what) { c->add_option("file", file, what)->capture_default_str(); };
    auto seeded = [&](CLI::App* c) { c->add_option("--seed", seed, "choice seed")->capture_default_str(); };

    // mantilla
    auto* man = app.add_subcommand("mantilla", "mantilla generation and checks")->require_subcommand(1);
    auto* manGen = man->add_subcommand("gen", "generate a mantilla on a centred ball");
    manGen->add_option("--radius", radius, "ball radius")->capture_default_str();
    seeded(manGen);
    manGen->add_option("--choices", choices, "explicit choice list, replaces the seed");
    auto* manVerify = man->add_subcommand("verify", "check a mantilla document");
    input(manVerify, "mantilla JSON");

    // isocline
    auto* iso = app.add_subcommand("isocline", "isocline arcs, numbering and seed checks")->require_subcommand(1);
    auto* isoNumber = iso->add_subcommand("number", "number the isoclines of a mantilla");
    input(isoNumber, "mantilla JSON");
    isoNumber->add_option("--anchor-value", anchorValue, "number of the centre's isocline")->check(CLI::Range(0, 19));
    auto* isoVerify = iso->add_subcommand("verify", "re-check a numbered map");
    input(isoVerify, "isocline JSON");
    auto* isoSeeds = iso->add_subcommand("seeds", "seed placement report");
    input(isoSeeds, "isocline JSON");

    // brackets
    auto* br = app.add_subcommand("brackets", "abstract bracket models")->require_subcommand(1);
    auto* brGen = br->add_subcommand("gen", "random model");
    brGen->add_option("--length", length, "letters")->capture_default_str();
    brGen->add_option("--gens", gens, "generations")->capture_default_str();
    seeded(brGen);
    auto* brCut = br->add_subcommand("cut", "cut a model at a letter");
    input(brCut, "model JSON");
    brCut->add_option("--at", at, "cut position")->required();

    // triangles
    auto* tri = app.add_subcommand("triangles", "interwoven triangles on the Euclidean grid")->require_subcommand(1);
    auto* triGrow = tri->add_subcommand("grow", "lift a bracket model");
    input(triGrow, "model JSON");
    triGrow->add_option("--scale", scale, "rows per letter")->capture_default_str();
    triGrow->add_option("--cuts", cuts, "one cut per axis, -1 for none (two or more make a strip)");
    auto* triSignals = tri->add_subcommand("signals", "simulate the signals of a lift");
    input(triSignals, "configuration JSON");
    auto* triVerify = tri->add_subcommand("verify", "check a configuration document");
    input(triVerify, "configuration JSON");
    auto* triEmit = tri->add_subcommand("emit-tiles", "tile set met on a corpus of lifts");
    triEmit->add_option("--models", models, "models in the corpus")->capture_default_str();
    triEmit->add_option("--length", length, "letters per model")->capture_default_str();
    triEmit->add_option("--gens", gens, "generations per model")->capture_default_str();

    // hyper
    auto* hyp = app.add_subcommand("hyper", "the construction lifted onto the heptagrid")->require_subcommand(1);
    auto* hypBuild = hyp->add_subcommand("build", "activate seeds, spread scent and grow trilaterals");
    input(hypBuild, "mantilla JSON");
    hypBuild->add_option("--depth", depth, "generations")->capture_default_str();
    seeded(hypBuild);
    auto* hypVerify = hyp->add_subcommand("verify", "rebuild and check a lifted document");
    input(hypVerify, "hyper JSON");

    // turing
    auto* tur = app.add_subcommand("turing", "machines, the reduction and the embedding")->require_subcommand(1);
    const char* machineHelp = "machine file, or corpus:NAME";
    auto* turRun = tur->add_subcommand("run", "space-time diagram");
    input(turRun, machineHelp);
    turRun->add_option("--steps", steps, "transition bound")->capture_default_str();
    turRun->add_option("--window", window, "tape cells")->capture_default_str();
    auto* turReduce = tur->add_subcommand("reduce", "Wang tiles with an origin; solve the origin patch");
    input(turReduce, machineHelp);
    turReduce->add_option("--width", width, "patch width (default 2h+1)");
    turReduce->add_option("--height", height, "patch height")->required();
    auto* turEmbed = tur->add_subcommand("embed", "run the machine on the free rows of a red triangle");
    input(turEmbed, machineHelp);
    turEmbed->add_option("--steps", steps, "transition bound")->capture_default_str();
    turEmbed->add_option("--length", length, "model letters")->capture_default_str();
    turEmbed->add_option("--gens", gens, "model generations")->capture_default_str();
    turEmbed->add_option("--generation", generation, "generation of the red triangle")->capture_default_str();
    seeded(turEmbed);

    // wang
    auto* wg = app.add_subcommand("wang", "bounded Wang tile searches")->require_subcommand(1);
    auto* wgSolve = wg->add_subcommand("solve", "fill a window");
    input(wgSolve, "tile set JSON");
    wgSolve->add_option("--width", width, "window width")->required();
    wgSolve->add_option("--height", height, "window height")->required();
    auto* wgHeesch = wg->add_subcommand("heesch", "bounded corona count");
    input(wgHeesch, "tile set JSON");
    wgHeesch->add_option("--kmax", kMax, "corona bound")->capture_default_str();
    auto* wgPeriodic = wg->add_subcommand("periodic", "smallest torus up to a bound");
    input(wgPeriodic, "tile set JSON");
    wgPeriodic->add_option("--pmax", pMax, "period bound")->capture_default_str();

    // render
    auto* ren = app.add_subcommand("render", "draw a mantilla, isocline, hyper or triangles document as SVG");
    input(ren, "document JSON");
    ren->add_option("--layers", layers, "comma list, 'all' or 'auto'")->capture_default_str();
    ren->add_option("--size", size, "drawing size in px")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    const bool svg = format == "svg";
    auto json_only = [&](const char* what) {
        if (svg) throw UsageError(std::string(what) + " has no SVG form");
    };
    auto disc = [&](const render::DiscScene& sc) {
        return render::renderPoincare(sc, spec_for(render::Target::PoincareDisc, layers, available(sc), size));
    };
    auto flat = [&](const interwoven::TrilateralConfig& cfg, const interwoven::SignalGrid& G,
                    const turing::Embedding* e = nullptr) {
        unsigned avail = render::kGridLayers & ~(e ? 0u : unsigned(render::Computation));
        return render::renderEuclidean(cfg, G, spec_for(render::Target::EuclideanGrid, layers, avail, size), e);
    };

    try {
        if (manGen->parsed()) {
            auto oracle = choices.empty() ? mantilla::seeded_oracle(seed) : mantilla::list_oracle(choices);
            auto m = mantilla::generateMantilla(ball(Address::center(), radius), oracle);
            emit(out, svg ? disc({m.region, &m}) : dump(mantilla::to_json(m)));
            return kOk;
        }
        if (manVerify->parsed()) {
            json_only("mantilla verify");
            mantilla::MantillaMap m;
            try {
                m = mantilla::map_from_json(read_json(file));
            } catch (const std::exception& e) {
                emit(out, dump({{"ok", false}, {"error", e.what()}}));
                return kFailed;
            }
            auto v = mantilla::verifyMantilla(m);
            emit(out, dump({{"ok", v.empty()}, {"tiles", m.tiles.size()}, {"violations", violations(v)}}));
            return v.empty() ? kOk : kFailed;
        }
        if (isoNumber->parsed()) {
            auto doc = read_json(file);
            auto m = mantilla::map_from_json(doc);
            auto im = isocline::numberIsoclines(isocline::assignArcs(m), m.region.center, anchorValue);
            emit(out, svg ? disc({m.region, &im.base, &im}) : dump(isocline::to_json(im)));
            return kOk;
        }
        if (isoVerify->parsed()) {
            json_only("isocline verify");
            isocline::IsoclineMap im;
            try {
                im = isocline::isoclines_from_json(read_json(file));
            } catch (const std::exception& e) {
                emit(out, dump({{"ok", false}, {"error", e.what()}}));
                return kFailed;
            }
            auto v = isocline::checkNumbering(im);
            v.insert(v.end(), im.violations.begin(), im.violations.end());
            emit(out, dump({{"ok", v.empty()}, {"violations", violations(v)}}));
            return v.empty() ? kOk : kFailed;
        }
        if (isoSeeds->parsed()) {
            json_only("isocline seeds");
            auto im = isocline::isoclines_from_json(read_json(file));
            auto rep = isocline::checkSeedLemma(im);
            json counts = json::array();
            for (auto& [a, n] : rep.fiveCounts) counts.push_back({{"root", to_json(a)}, {"seedsOnFive", n}});
            bool fails = rep.seedOnFive == isocline::Verdict::Fails || rep.seedsEveryLevel == isocline::Verdict::Fails ||
                         rep.seedNearby == isocline::Verdict::Fails;
            emit(out, dump({{"ok", !fails},
                            {"seedOnFive", isocline::to_string(rep.seedOnFive)},
                            {"seedsEveryLevel", isocline::to_string(rep.seedsEveryLevel)},
                            {"seedNearby", isocline::to_string(rep.seedNearby)},
                            {"fiveCounts", counts},
                            {"notes", rep.notes}}));
            return fails ? kFailed : kOk;
        }
        if (brGen->parsed()) {
            json_only("brackets gen");
            emit(out, dump(brackets::to_json(brackets::randomModel(length, gens, seed))));
            return kOk;
        }
        if (brCut->parsed()) {
            json_only("brackets cut");
            emit(out, dump(brackets::to_json(brackets::cut(brackets::model_from_json(read_json(file)), at))));
            return kOk;
        }
        if (triGrow->parsed()) {
            auto cfg = lift(brackets::model_from_json(read_json(file)), scale, cuts);
            emit(out, svg ? flat(cfg, interwoven::simulateSignals(cfg)) : dump(interwoven::to_json(cfg)));
            return kOk;
        }
        if (triSignals->parsed()) {
            auto cfg = interwoven::config_from_json(read_json(file));
            auto G = interwoven::simulateSignals(cfg);
            if (svg) {
                emit(out, flat(cfg, G));
                return kOk;
            }
            auto v = interwoven::checkSignals(cfg, G);
            emit(out, dump({{"config", interwoven::to_json(cfg)}, {"signals", interwoven::to_json(G)}, {"ok", v.empty()},
                            {"violations", strings(v)}}));
            return v.empty() ? kOk : kFailed;
        }
        if (triVerify->parsed()) {
            json_only("triangles verify");
            interwoven::TrilateralConfig cfg;
            try {
                auto doc = read_json(file);
                cfg = interwoven::config_from_json(doc.contains("config") ? doc.at("config") : doc);
            } catch (const std::exception& e) {
                emit(out, dump({{"ok", false}, {"error", e.what()}}));
                return kFailed;
            }
            auto l6 = interwoven::checkLemma6(cfg);
            auto v = interwoven::checkSignals(cfg, interwoven::simulateSignals(cfg));
            bool ok = l6.ok() && v.empty();
            emit(out, dump({{"ok", ok},
                            {"disjointOrNested", strings(l6.disjointOrNested)},
                            {"towers", strings(l6.towers)},
                            {"contacts", strings(l6.contacts)},
                            {"signals", strings(v)}}));
            return ok ? kOk : kFailed;
        }
        if (triEmit->parsed()) {
            json_only("triangles emit-tiles");
            auto E = interwoven::emitTileSet(interwoven::defaultCorpus(models, length, gens));
            emit(out, dump(interwoven::to_json(E)));
            return kOk;
        }
        if (hypBuild->parsed()) {
            auto doc = read_json(file);
            auto m = mantilla::map_from_json(doc);
            auto hc = build_hyper(m, depth, seed);
            if (svg) {
                auto S = hyperlift::simulateSignals(hc);
                emit(out, disc({hc.region(), &hc.base.base, &hc.base, &hc, &S}));
            } else {
                emit(out, dump(hyper_document(doc, depth, seed, hc)));
            }
            return kOk;
        }
        if (hypVerify->parsed()) {
            json_only("hyper verify");
            auto doc = read_json(file);
            std::vector<std::string> problems;
            try {
                auto& in = doc.at("input");
                auto hc = build_hyper(mantilla::map_from_json(in.at("mantilla")), in.at("depth").get<int>(),
                                      in.at("seed").get<std::uint64_t>());
                if (hyperlift::to_json(hc) != doc.at("hyper")) problems.push_back("document disagrees with its rebuild");
                for (auto& s : hyperlift::latitudeViolations(hc)) problems.push_back(s);
                for (auto& s : hyperlift::cutConsistency(hc)) problems.push_back(s);
                for (auto& s : hyperlift::verifyLocalMatching(hc)) problems.push_back(s);
                auto S = hyperlift::simulateSignals(hc);
                for (auto& s : S.legJoins) problems.push_back(s);
                for (auto& s : S.violations) problems.push_back(s);
            } catch (const std::exception& e) {
                problems.push_back(e.what());
            }
            emit(out, dump({{"ok", problems.empty()}, {"problems", problems}}));
            return problems.empty() ? kOk : kFailed;
        }
        if (turRun->parsed()) {
            json_only("turing run");
            auto tm = load_machine(file);
            json j;
            try {
                j = turing::to_json(tm, turing::run(tm, steps, window));
            } catch (const turing::WindowError& e) {
                emit(out, dump({{"ok", false}, {"error", e.what()}}));
                return kFailed;
            }
            emit(out, dump(j));
            return kOk;
        }
        if (turReduce->parsed()) {
            json_only("turing reduce");
            auto tm = load_machine(file);
            int w = width > 0 ? width : 2 * height + 1;
            auto R = turing::euclideanReduction(tm);
            auto P = turing::originPatch(R, w, height);
            bool predicted = turing::predictedTileable(tm, w, height);
            json j{{"tiles", R.tiles.tiles.size()},
                   {"width", w},
                   {"height", height},
                   {"tileable", P.has_value()},
                   {"predicted", predicted},
                   {"ok", P.has_value() == predicted},
                   {"tileSet", wang::to_json(R.tiles)}};
            j["patch"] = P ? wang::to_json(*P) : json(nullptr);
            emit(out, dump(j));
            return P.has_value() == predicted ? kOk : kFailed;
        }
        if (turEmbed->parsed()) {
            auto tm = load_machine(file);
            auto cfg = interwoven::liftConfig(brackets::randomModel(length, gens, seed), 2);
            int idx = turing::findRedTriangle(cfg, generation);
            if (idx < 0) throw UsageError("no closed red triangle of generation " + std::to_string(generation));
            auto g = turing::buildGrid(cfg, idx);
            auto e = turing::embedComputation(g, tm, steps);
            if (svg) {
                emit(out, flat(cfg, interwoven::simulateSignals(cfg), &e));
                return kOk;
            }
            std::vector<std::string> diff;
            try {
                diff = turing::compareWithRun(e, turing::run(tm, e.steps, 2 * g.rows() + 1));
            } catch (const turing::WindowError& err) {
                diff.push_back(err.what());
            }
            auto j = turing::to_json(tm, e);
            j["grid"] = turing::to_json(g);
            j["ok"] = diff.empty();
            j["differences"] = diff;
            emit(out, dump(j));
            return diff.empty() ? kOk : kFailed;
        }
        if (wgSolve->parsed() || wgHeesch->parsed() || wgPeriodic->parsed()) {
            json_only("wang");
            wang::WangTileSet S;
            try {
                S = wang::tileset_from_json(read_json(file));
            } catch (const wang::WangError& e) {
                throw UsageError(e.what());
            }
            json j;
            if (wgSolve->parsed()) {
                wang::Constraints k;
                if (S.origin) k.fixed[{0, 0}] = *S.origin;
                auto r = wang::solvePatchEx(S, width, height, k);
                j = {{"width", width}, {"height", height}, {"nodes", r.nodes}};
                j["patch"] = r.patch ? wang::to_json(*r.patch) : json(nullptr);
            } else if (wgHeesch->parsed()) {
                auto h = wang::heeschBounded(S, kMax);
                j = {{"coronas", h.coronas}, {"atLeast", h.atLeast}, {"text", wang::to_string(h)}};
            } else {
                auto r = wang::findPeriodicTiling(S, pMax);
                j["period"] = r.period ? json({r.period->first, r.period->second}) : json(nullptr);
                j["torus"] = r.torus ? wang::to_json(*r.torus) : json(nullptr);
                j["exhausted"] = r.exhausted;
            }
            emit(out, dump(j));
            return kOk;
        }
        if (ren->parsed()) {
            if (format == "json") format = "svg";
            auto doc = read_json(file);
            if (doc.contains("hyper") && doc.contains("input")) {
                auto& in = doc.at("input");
                auto hc = build_hyper(mantilla::map_from_json(in.at("mantilla")), in.at("depth").get<int>(),
                                      in.at("seed").get<std::uint64_t>());
                auto S = hyperlift::simulateSignals(hc);
                emit(out, disc({hc.region(), &hc.base.base, &hc.base, &hc, &S}));
            } else if (doc.contains("base") && doc.contains("tiles")) {
                auto im = isocline::isoclines_from_json(doc);
                emit(out, disc({im.base.region, &im.base, &im}));
            } else if (doc.contains("choiceLog") && doc.contains("region")) {
                auto m = mantilla::map_from_json(doc);
                emit(out, disc({m.region, &m}));
            } else if (doc.contains("trilaterals") || doc.contains("config")) {
                auto cfg = interwoven::config_from_json(doc.contains("config") ? doc.at("config") : doc);
                emit(out, flat(cfg, interwoven::simulateSignals(cfg)));
            } else {
                throw UsageError(file + ": not a document the renderer knows");
            }
            return kOk;
        }
    } catch (const UsageError& e) {
        std::cerr << "hypdom: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "hypdom: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
