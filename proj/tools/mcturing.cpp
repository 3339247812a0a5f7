#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include <mcturing/corpus.hpp>
#include <mcturing/mcturing.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mcturing;

namespace {

struct Globals {
    bool json_out = false;
    std::uint64_t seed = 1;
    std::size_t capacity = default_u_capacity;
    std::vector<std::string> artifacts;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(Globals& g, const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path.string());
    out << content;
    g.artifacts.push_back(path.string());
}

MachineRef load_machine(const std::string& path) {
    return MachineRef::from_table(parse_tm(read_file(path)));
}

Circuit load_circuit(const std::string& path) { return Circuit::parse(read_file(path)); }

std::string pretty_word(const TritWord& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += to_char(w[i]);
    }
    return s;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string outcome_token(const ExtendedOutcome& o) {
    switch (o.kind) {
        case ExtendedOutcome::Kind::Value: return std::string(1, to_char(o.value));
        case ExtendedOutcome::Kind::NoHalt: return "no-halt";
        default: return "u-sym";
    }
}

bool looks_like_manifest(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '{';
    }
    return false;
}

json record_json(const BlowupRecord& r) {
    return json{{"steps_total", r.total_steps},
                {"steps_per_resolution", r.per_resolution_steps}};
}

// ---------------------------------------------------------------------------
// circuit subcommands
// ---------------------------------------------------------------------------

void cmd_eval_circuit(Globals& g, const std::string& file, const std::string& input) {
    Circuit c = load_circuit(file);
    TritWord y = eval_kleene(c, TritWord::parse(input));
    if (g.json_out)
        emit({{"output", y.str()}});
    else
        std::cout << y.str() << "\n";
}

void cmd_hazard_check(Globals& g, const std::string& file, std::uint64_t samples) {
    HazardCheckOptions opts;
    opts.samples = samples;
    opts.seed = g.seed;
    opts.capacity = g.capacity;
    HazardReport r = is_hazard_free(load_circuit(file), opts);
    if (g.json_out) {
        json j{{"hazard_free", r.hazard_free},
               {"exhaustive", r.exhaustive},
               {"checked", r.checked}};
        if (!r.hazard_free) {
            j["witness"] = r.witness.str();
            j["expected"] = r.expected.str();
            j["actual"] = r.actual.str();
        }
        emit(j);
        return;
    }
    if (r.hazard_free) {
        std::cout << "hazard-free (" << (r.exhaustive ? "exhaustive" : "sampled") << ", "
                  << r.checked << " inputs)\n";
    } else {
        std::cout << "hazard witness: " << pretty_word(r.witness) << "\n"
                  << "expected: " << r.expected.str() << "\n"
                  << "actual: " << r.actual.str() << "\n";
    }
}

void cmd_check_natural(Globals& g, const std::string& file) {
    TernaryTable t = TernaryTable::parse(read_file(file));
    NaturalnessReport r = is_natural(t);
    std::string verdict = r.verdict == NaturalnessReport::Verdict::Natural ? "natural"
                          : r.verdict == NaturalnessReport::Verdict::StableMapsToU
                              ? "stable-maps-to-u"
                              : "not-monotone";
    if (g.json_out) {
        json j{{"natural", r.natural()}, {"verdict", verdict}};
        if (r.verdict != NaturalnessReport::Verdict::Natural) j["witness_x"] = r.witness_x.str();
        if (r.verdict == NaturalnessReport::Verdict::NotMonotone)
            j["witness_y"] = r.witness_y.str();
        emit(j);
        return;
    }
    switch (r.verdict) {
        case NaturalnessReport::Verdict::Natural: std::cout << "natural\n"; break;
        case NaturalnessReport::Verdict::StableMapsToU:
            std::cout << "not natural: stable input " << r.witness_x.str() << " maps to u\n";
            break;
        case NaturalnessReport::Verdict::NotMonotone:
            std::cout << "not natural: monotonicity fails between " << r.witness_x.str()
                      << " and " << r.witness_y.str() << "\n";
            break;
    }
}

void cmd_emit_cmux(Globals& g, std::size_t levels, const std::string& out) {
    Circuit c = build_cmux_tree(levels);
    std::string netlist = c.serialize();
    if (!out.empty()) write_file(g, out, netlist);
    if (g.json_out) {
        emit({{"levels", levels},
              {"inputs", c.n_inputs},
              {"gates", c.size()},
              {"netlist", netlist}});
    } else if (out.empty()) {
        std::cout << netlist;
    } else {
        std::cout << "wrote " << out << "\n";
    }
}

// ---------------------------------------------------------------------------
// machine subcommands
// ---------------------------------------------------------------------------

json trace_json(const std::vector<TraceEntry>& trace) {
    json arr = json::array();
    for (const TraceEntry& e : trace)
        arr.push_back({{"step", e.step},
                       {"state", e.state},
                       {"head", e.head},
                       {"read", std::string(1, symbol_char(e.read))},
                       {"write", std::string(1, symbol_char(e.write))},
                       {"move", e.move == Move::left ? "L" : "R"}});
    return arr;
}

void cmd_simulate(Globals& g, const std::string& file, const std::string& input,
                  std::uint64_t budget, bool with_trace) {
    MachineRef m = load_machine(file);
    std::vector<TraceEntry> trace;
    SimOutcome out = simulate(m, TritWord::parse(input), budget, with_trace ? &trace : nullptr);
    if (g.json_out || with_trace) {
        json j{{"halted", out.halted}, {"steps", out.steps}};
        if (out.halted) j["output"] = out.output.str();
        if (with_trace) j["trace"] = trace_json(trace);
        emit(j);
        return;
    }
    std::cout << "halted: " << (out.halted ? "yes" : "no") << "\n"
              << "steps: " << out.steps << "\n";
    if (out.halted) std::cout << "output: " << out.output.str() << "\n";
}

void cmd_oblivious_probe(Globals& g, const std::string& file, std::size_t len,
                         std::size_t samples, std::uint64_t budget) {
    ObliviousReport r = is_oblivious_probe(load_machine(file), len, budget, samples, g.seed);
    if (g.json_out) {
        json j{{"consistent", r.consistent}};
        if (r.consistent) {
            j["halts"] = r.halts;
            if (r.halts) j["halt_step"] = r.halt_step;
            j["trajectory"] = r.trajectory;
        } else {
            j["witness_a"] = r.witness_a.str();
            j["witness_b"] = r.witness_b.str();
            j["diverge_step"] = r.diverge_step;
        }
        emit(j);
        return;
    }
    std::cout << "consistent: " << (r.consistent ? "yes" : "no") << "\n";
    if (r.consistent) {
        std::cout << "halts: " << (r.halts ? "yes" : "no") << "\n";
        if (r.halts) std::cout << "halt-step: " << r.halt_step << "\n";
        std::cout << "trajectory:";
        for (std::int64_t h : r.trajectory) std::cout << ' ' << h;
        std::cout << "\n";
    } else {
        std::cout << "diverge-step: " << r.diverge_step << "\n"
                  << "witness-a: " << r.witness_a.str() << "\n"
                  << "witness-b: " << r.witness_b.str() << "\n";
    }
}

// ---------------------------------------------------------------------------
// universal subcommands
// ---------------------------------------------------------------------------

void cmd_closure_sim(Globals& g, const std::string& file, const std::string& input,
                     std::uint64_t budget, bool bounded) {
    MachineRef m = load_machine(file);
    TritWord x = TritWord::parse(input);
    if (bounded) {
        BoundedResult r = mc_universal_bounded(m, x, budget, g.capacity);
        std::string token = outcome_token(r.outcome);
        if (g.json_out) {
            json j{{"result", token}};
            j.update(record_json(r.record));
            emit(j);
        } else {
            std::cout << token << "\n";
        }
        return;
    }
    UniversalResult r = mc_universal(m, x, budget, g.capacity);
    if (g.json_out) {
        json j{{"result", std::string(1, to_char(r.value))}};
        j.update(record_json(r.record));
        emit(j);
    } else {
        std::cout << to_char(r.value) << "\n";
    }
}

void cmd_cmux(Globals& g, const std::string& select, const std::string& data) {
    SelectionTape tape = SelectionTape::from_word(TritWord::parse(data));
    TCmuxResult r = t_cmux(tape, TritWord::parse(select));
    if (g.json_out)
        emit({{"result", std::string(1, to_char(r.value))},
              {"applications", r.cmux_applications},
              {"ops", tape.ops}});
    else
        std::cout << to_char(r.value) << "\n";
}

void cmd_bench_blowup(Globals& g, const std::string& family_name, std::size_t n_min,
                      std::size_t n_max, const std::string& csv_path) {
    if (n_min > n_max) throw error("bench-blowup: n-min exceeds n-max");
    auto family = [&](std::size_t) { return corpus::machine_ref(family_name); };
    auto budget = [](std::size_t n) { return std::uint64_t(64 * n + 64); };
    auto records = blowup_bench(family, n_min, n_max, budget, g.capacity);

    std::ostringstream csv;
    csv << "n,total_steps,ratio_to_prev\n";
    json rows = json::array();
    for (std::size_t i = 0; i < records.size(); ++i) {
        csv << records[i].input_length << ',' << records[i].total_steps << ',';
        json row{{"n", records[i].input_length}, {"total_steps", records[i].total_steps}};
        if (i == 0) {
            row["ratio_to_prev"] = nullptr;
        } else {
            double ratio = double(records[i].total_steps) / double(records[i - 1].total_steps);
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", ratio);
            csv << buf;
            row["ratio_to_prev"] = ratio;
        }
        csv << '\n';
        rows.push_back(row);
    }
    if (!csv_path.empty()) write_file(g, csv_path, csv.str());
    if (g.json_out)
        emit({{"family", family_name}, {"rows", rows}});
    else if (csv_path.empty())
        std::cout << csv.str();
    else
        std::cout << "wrote " << csv_path << "\n";
}

// ---------------------------------------------------------------------------
// problem subcommands
// ---------------------------------------------------------------------------

Detect1Instance detect1_from_manifest(const fs::path& manifest_path, const json& j) {
    if (j.value("reduction", "") != "detect1")
        throw error("manifest is not a detect1 instance bundle");
    fs::path machine_file = manifest_path.parent_path() / j.at("machine").get<std::string>();
    MachineRef m = load_machine(machine_file.string());
    Detect1Instance inst =
        reduce_pexp_to_detect1(m, TritWord::parse(j.at("source_input").get<std::string>()),
                               j.at("source_bound").get<std::uint64_t>());
    if (inst.input.str() != j.at("x").get<std::string>() ||
        inst.bound != j.at("bound").get<std::uint64_t>())
        throw error("manifest does not match its reduction");
    return inst;
}

DetectPolyInstance detect_poly_from_manifest(const json& j) {
    if (j.value("reduction", "") != "tautology")
        throw error("manifest is not a tautology instance bundle");
    DetectPolyInstance inst =
        reduce_tautology_to_detect_poly(Formula::parse(j.at("formula").get<std::string>()));
    if (inst.input.str() != j.at("x").get<std::string>() ||
        inst.exponent != j.at("exponent").get<std::uint64_t>())
        throw error("manifest does not match its reduction");
    return inst;
}

void cmd_detect1(Globals& g, const std::string& file, const std::string& input,
                 std::uint64_t bound) {
    std::string text = read_file(file);
    Detect1Instance inst;
    if (looks_like_manifest(text)) {
        inst = detect1_from_manifest(file, json::parse(text));
    } else {
        inst.machine = MachineRef::from_table(parse_tm(text));
        inst.input = TritWord::parse(input);
        inst.bound = bound;
    }
    bool detected = decide_detect1(inst);
    if (g.json_out)
        emit({{"detected", detected},
              {"input", inst.input.str()},
              {"bound", inst.bound}});
    else
        std::cout << "detected: " << (detected ? "yes" : "no") << "\n";
}

void cmd_detect_poly(Globals& g, const std::string& file, const std::string& input,
                     std::uint64_t exponent) {
    std::string text = read_file(file);
    DetectPolyInstance inst;
    if (looks_like_manifest(text)) {
        inst = detect_poly_from_manifest(json::parse(text));
    } else {
        inst.machine = MachineRef::from_table(parse_tm(text));
        inst.input = TritWord::parse(input);
        inst.exponent = exponent;
    }
    bool accepted = decide_detect_poly(inst, g.capacity);
    if (g.json_out)
        emit({{"accepted", accepted},
              {"input", inst.input.str()},
              {"exponent", inst.exponent}});
    else
        std::cout << "accepted: " << (accepted ? "yes" : "no") << "\n";
}

void emit_bundle(Globals& g, const std::string& out_dir, const json& manifest,
                 const std::string& aux_name, const std::string& aux_content) {
    if (out_dir.empty()) {
        emit(manifest);
        return;
    }
    fs::path dir(out_dir);
    fs::create_directories(dir);
    if (!aux_name.empty()) write_file(g, dir / aux_name, aux_content);
    write_file(g, dir / "instance.json", manifest.dump(2) + "\n");
    if (g.json_out) {
        emit({{"written", g.artifacts}});
    } else {
        for (const std::string& a : g.artifacts) std::cout << "wrote " << a << "\n";
    }
}

void cmd_reduce_pexp(Globals& g, const std::string& file, const std::string& input,
                     std::uint64_t bound, const std::string& out_dir) {
    std::string machine_text = read_file(file);
    MachineRef m = MachineRef::from_table(parse_tm(machine_text));
    PExpBhpInstance inst = reduce_bhp_to_pexp(m, TritWord::parse(input), bound);
    json manifest{{"reduction", "pexp-bhp"},
                  {"machine", out_dir.empty() ? file : "machine.tm"},
                  {"source_bound", bound},
                  {"x", inst.input.str()},
                  {"bound", inst.bound}};
    emit_bundle(g, out_dir, manifest, out_dir.empty() ? "" : "machine.tm", machine_text);
}

void cmd_reduce_detect1(Globals& g, const std::string& file, const std::string& input,
                        std::uint64_t bound, const std::string& out_dir) {
    std::string machine_text = read_file(file);
    MachineRef m = MachineRef::from_table(parse_tm(machine_text));
    Detect1Instance inst = reduce_pexp_to_detect1(m, TritWord::parse(input), bound);
    json manifest{{"reduction", "detect1"},
                  {"machine", out_dir.empty() ? file : "machine.tm"},
                  {"source_input", input},
                  {"source_bound", bound},
                  {"x", inst.input.str()},
                  {"bound", inst.bound}};
    emit_bundle(g, out_dir, manifest, out_dir.empty() ? "" : "machine.tm", machine_text);
}

void cmd_reduce_tautology(Globals& g, const std::string& file, std::size_t index,
                          const std::string& out_dir) {
    auto formulas = parse_formula_lines(read_file(file));
    if (index >= formulas.size())
        throw error("formula index " + std::to_string(index) + " out of range, file has " +
                    std::to_string(formulas.size()));
    const Formula& f = formulas[index];
    DetectPolyInstance inst = reduce_tautology_to_detect_poly(f);
    json manifest{{"reduction", "tautology"},
                  {"formula", f.str()},
                  {"x", inst.input.str()},
                  {"exponent", inst.exponent}};
    emit_bundle(g, out_dir, manifest, out_dir.empty() ? "" : "formula.txt", f.str() + "\n");
}

void cmd_tautology(Globals& g, const std::string& file) {
    auto formulas = parse_formula_lines(read_file(file));
    json results = json::array();
    for (const Formula& f : formulas) {
        bool taut = decide_detect_poly(reduce_tautology_to_detect_poly(f), g.capacity);
        results.push_back({{"formula", f.str()}, {"tautology", taut}});
        if (!g.json_out)
            std::cout << f.str() << ": " << (taut ? "tautology" : "not a tautology") << "\n";
    }
    if (g.json_out) emit({{"results", results}});
}

// ---------------------------------------------------------------------------
// corpus subcommands
// ---------------------------------------------------------------------------

void cmd_corpus_list(Globals& g) {
    if (g.json_out) {
        json entries = json::array();
        for (const corpus::Entry& e : corpus::list())
            entries.push_back({{"name", e.name}, {"kind", e.kind}, {"file", e.file}});
        emit({{"entries", entries}});
        return;
    }
    for (const corpus::Entry& e : corpus::list())
        std::cout << e.name << "\t" << e.kind << "\t" << (e.file.empty() ? "(built-in)" : e.file)
                  << "\n";
}

std::string natural_pair_text(const corpus::NaturalPair& p) {
    std::ostringstream out;
    out << "# natural machine: state width " << p.natural.state_width << ", start "
        << p.natural.start_state.str() << ", finals";
    for (const TritWord& f : p.natural.finals) out << ' ' << f.str();
    out << "\n";
    for (const auto& [word, name] : p.state_names)
        out << "# state " << word << " = " << name << "\n";
    out << p.natural.transition.serialize();
    return out.str();
}

void cmd_corpus_show(Globals& g, const std::string& name) {
    std::string body;
    if (name == "natural-parity")
        body = natural_pair_text(corpus::natural_parity_pair());
    else if (name == "natural-and")
        body = natural_pair_text(corpus::natural_and_pair());
    else
        body = corpus::text(name);
    if (g.json_out)
        emit({{"name", name}, {"text", body}});
    else
        std::cout << body;
}

void cmd_corpus_export(Globals& g, const std::string& dir) {
    for (const corpus::Entry& e : corpus::list()) {
        if (e.file.empty()) continue;
        write_file(g, fs::path(dir) / e.file, corpus::text(e.name));
    }
    if (g.json_out) {
        emit({{"written", g.artifacts}});
    } else {
        for (const std::string& a : g.artifacts) std::cout << "wrote " << a << "\n";
    }
}

// ---------------------------------------------------------------------------
// manifest plumbing
// ---------------------------------------------------------------------------

void write_run_manifest(Globals& g, CLI::App& app, const std::string& path) {
    std::string command;
    const CLI::App* level = &app;
    json inputs = json::object();
    while (level != nullptr) {
        for (const CLI::Option* opt : level->get_options()) {
            if (opt->count() == 0) continue;
            std::string name = opt->get_name();
            if (name == "--emit-manifest" || name == "--help") continue;
            std::string value;
            for (const std::string& r : opt->results()) {
                if (!value.empty()) value += ',';
                value += r;
            }
            if (value.empty()) value = std::to_string(opt->count());
            inputs[name] = value;
        }
        auto subs = level->get_subcommands();
        if (subs.empty()) break;
        level = subs.front();
        command += (command.empty() ? "" : " ") + level->get_name();
    }
    json manifest{{"command", command},
                  {"inputs", inputs},
                  {"seed", g.seed},
                  {"artifacts", g.artifacts}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("cannot write " + path);
    out << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metastability-containing circuit and machine toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    std::string manifest_path;
    app.add_flag("--json", g.json_out, "emit machine-readable JSON");
    app.add_option("--seed", g.seed, "seed for sampled checks")->capture_default_str();
    app.add_option("--capacity", g.capacity, "largest tolerated resolution exponent")
        ->envname("MCTURING_CAPACITY")
        ->capture_default_str();
    app.add_option("--emit-manifest", manifest_path, "record the run as a manifest file");

    // circuit module
    struct {
        std::string file, input;
    } ec;
    auto* s_ec = app.add_subcommand("eval-circuit", "Kleene-evaluate a netlist on a trit word");
    s_ec->add_option("file", ec.file, "netlist file")->required();
    s_ec->add_option("--input", ec.input, "input trit word")->required();
    s_ec->callback([&] { cmd_eval_circuit(g, ec.file, ec.input); });

    struct {
        std::string file;
        std::uint64_t samples = 10'000;
    } hc;
    auto* s_hc = app.add_subcommand("hazard-check", "compare a netlist against its closure");
    s_hc->add_option("file", hc.file, "netlist file")->required();
    s_hc->add_option("--samples", hc.samples, "samples when exhaustion is infeasible")
        ->capture_default_str();
    s_hc->callback([&] { cmd_hazard_check(g, hc.file, hc.samples); });

    struct {
        std::string file;
    } cn;
    auto* s_cn = app.add_subcommand("check-natural", "test a ternary table for naturalness");
    s_cn->add_option("file", cn.file, "ternary table file")->required();
    s_cn->callback([&] { cmd_check_natural(g, cn.file); });

    struct {
        std::size_t levels = 1;
        std::string out;
    } ecm;
    auto* s_ecm = app.add_subcommand("emit-cmux", "emit a CMUX selection tree netlist");
    s_ecm->add_option("--levels", ecm.levels, "selection levels")->required();
    s_ecm->add_option("--out", ecm.out, "write the netlist to a file");
    s_ecm->callback([&] { cmd_emit_cmux(g, ecm.levels, ecm.out); });

    // machine module
    struct {
        std::string file, input, trace;
        std::uint64_t budget = 0;
    } sim;
    auto* s_sim = app.add_subcommand("simulate", "run a machine with a step budget");
    s_sim->add_option("machine", sim.file, "machine description file")->required();
    s_sim->add_option("--input", sim.input, "input trit word");
    s_sim->add_option("--budget", sim.budget, "step budget")->required();
    s_sim->add_option("--trace", sim.trace, "trace format")->check(CLI::IsMember({"json"}));
    s_sim->callback([&] { cmd_simulate(g, sim.file, sim.input, sim.budget, !sim.trace.empty()); });

    struct {
        std::string file;
        std::size_t len = 0, samples = 100;
        std::uint64_t budget = 10'000;
    } ob;
    auto* s_ob = app.add_subcommand("oblivious-probe", "probe whether the head trajectory is "
                                                       "input-independent");
    s_ob->add_option("machine", ob.file, "machine description file")->required();
    s_ob->add_option("--len", ob.len, "input length")->required();
    s_ob->add_option("--samples", ob.samples, "random stable inputs to try")
        ->capture_default_str();
    s_ob->add_option("--budget", ob.budget, "per-run step budget")->capture_default_str();
    s_ob->callback([&] { cmd_oblivious_probe(g, ob.file, ob.len, ob.samples, ob.budget); });

    // universal module
    struct {
        std::string file, input;
        std::uint64_t budget = 1'000'000;
        bool bounded = false;
    } cs;
    auto* s_cs = app.add_subcommand("closure-sim", "universal simulation of the closure");
    s_cs->add_option("machine", cs.file, "machine description file")->required();
    s_cs->add_option("--input", cs.input, "input trit word")->required();
    s_cs->add_option("--budget", cs.budget, "per-resolution step budget")->capture_default_str();
    s_cs->add_flag("--bounded", cs.bounded, "aggregate budget-cut outcomes instead");
    s_cs->callback([&] { cmd_closure_sim(g, cs.file, cs.input, cs.budget, cs.bounded); });

    struct {
        std::string select, data;
    } cx;
    auto* s_cx = app.add_subcommand("cmux", "select from a data word with a possibly "
                                            "unstable select word");
    s_cx->add_option("--select", cx.select, "select trit word, most significant first")
        ->required();
    s_cx->add_option("--data", cx.data, "data trit word, power-of-two length")->required();
    s_cx->callback([&] { cmd_cmux(g, cx.select, cx.data); });

    struct {
        std::string family = "parity", csv;
        std::size_t n_min = 1, n_max = 1;
    } bb;
    auto* s_bb = app.add_subcommand("bench-blowup", "measure universal-simulation growth");
    s_bb->add_option("--family", bb.family, "machine family")
        ->check(CLI::IsMember({"parity", "and"}))
        ->capture_default_str();
    s_bb->add_option("--n-min", bb.n_min, "smallest input length")->required();
    s_bb->add_option("--n-max", bb.n_max, "largest input length")->required();
    s_bb->add_option("--csv", bb.csv, "write CSV to a file");
    s_bb->callback([&] { cmd_bench_blowup(g, bb.family, bb.n_min, bb.n_max, bb.csv); });

    // problems module
    struct {
        std::string file, input;
        std::uint64_t bound = 1;
    } d1;
    auto* s_d1 = app.add_subcommand("detect1", "decide one-unstable-bit detection");
    s_d1->add_option("file", d1.file, "machine file or instance manifest")->required();
    s_d1->add_option("--input", d1.input, "trit word with exactly one u");
    s_d1->add_option("--bound", d1.bound, "step bound");
    s_d1->callback([&] { cmd_detect1(g, d1.file, d1.input, d1.bound); });

    struct {
        std::string file, input;
        std::uint64_t exp = 1;
    } dp;
    auto* s_dp = app.add_subcommand("detect-poly", "decide polynomially bounded detection");
    s_dp->add_option("file", dp.file, "machine file or instance manifest")->required();
    s_dp->add_option("--input", dp.input, "input trit word");
    s_dp->add_option("--exp", dp.exp, "budget exponent");
    s_dp->callback([&] { cmd_detect_poly(g, dp.file, dp.input, dp.exp); });

    auto* s_red = app.add_subcommand("reduce", "emit a self-contained reduction instance");
    s_red->require_subcommand(1);

    struct {
        std::string file, input, out;
        std::uint64_t bound = 1;
    } rp;
    auto* s_rp = s_red->add_subcommand("pexp-bhp", "bounded halting to ladder-bounded halting");
    s_rp->add_option("machine", rp.file, "machine description file")->required();
    s_rp->add_option("--input", rp.input, "stable input word");
    s_rp->add_option("--bound", rp.bound, "original step bound")->required();
    s_rp->add_option("--out", rp.out, "bundle directory");
    s_rp->callback([&] { cmd_reduce_pexp(g, rp.file, rp.input, rp.bound, rp.out); });

    struct {
        std::string file, input, out;
        std::uint64_t bound = 3;
    } rd;
    auto* s_rd = s_red->add_subcommand("detect1", "ladder-bounded halting to one-bit detection");
    s_rd->add_option("machine", rd.file, "machine description file")->required();
    s_rd->add_option("--input", rd.input, "stable input word");
    s_rd->add_option("--bound", rd.bound, "ladder bound of shape 2^i + 1")->required();
    s_rd->add_option("--out", rd.out, "bundle directory");
    s_rd->callback([&] { cmd_reduce_detect1(g, rd.file, rd.input, rd.bound, rd.out); });

    struct {
        std::string file, out;
        std::size_t index = 0;
    } rt;
    auto* s_rt = s_red->add_subcommand("tautology", "tautology to polynomial detection");
    s_rt->add_option("formulas", rt.file, "formula file, one prefix expression per line")
        ->required();
    s_rt->add_option("--index", rt.index, "formula line to reduce")->capture_default_str();
    s_rt->add_option("--out", rt.out, "bundle directory");
    s_rt->callback([&] { cmd_reduce_tautology(g, rt.file, rt.index, rt.out); });

    struct {
        std::string file;
    } ta;
    auto* s_ta = app.add_subcommand("tautology", "decide tautology via the detection pipeline");
    s_ta->add_option("formulas", ta.file, "formula file, one prefix expression per line")
        ->required();
    s_ta->callback([&] { cmd_tautology(g, ta.file); });

    // corpus module
    auto* s_co = app.add_subcommand("corpus", "bundled machines, circuits and formulas");
    s_co->require_subcommand(1);
    s_co->add_subcommand("list", "enumerate bundled fixtures")->callback([&] {
        cmd_corpus_list(g);
    });
    struct {
        std::string name;
    } cxs;
    auto* s_cos = s_co->add_subcommand("show", "print one bundled fixture");
    s_cos->add_option("name", cxs.name, "fixture name")->required();
    s_cos->callback([&] { cmd_corpus_show(g, cxs.name); });
    struct {
        std::string dir;
    } cxe;
    auto* s_coe = s_co->add_subcommand("export", "write bundled fixtures to a directory");
    s_coe->add_option("dir", cxe.dir, "target directory")->required();
    s_coe->callback([&] { cmd_corpus_export(g, cxe.dir); });

    try {
        app.parse(argc, argv);
        if (!manifest_path.empty()) write_run_manifest(g, app, manifest_path);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
