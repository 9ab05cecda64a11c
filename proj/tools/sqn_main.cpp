// sqn: build the product-set families, verify their structure, certify
// strong nonlocality (numerically and structurally), simulate the
// entanglement-assisted discrimination protocol, and draw tiling diagrams.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sqn/certifier.hpp"
#include "sqn/construction.hpp"
#include "sqn/document.hpp"
#include "sqn/protocol.hpp"
#include "sqn/relations.hpp"
#include "sqn/report.hpp"
#include "sqn/structure.hpp"
#include "sqn/tiling.hpp"

namespace {

using namespace sqn;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            dims.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw UsageError("bad dimension '" + item + "'");
        }
    }
    if (dims.empty()) throw UsageError("empty dimension list");
    return dims;
}

struct CommonOpts {
    std::string in_path;
    std::string dims_text;
    std::string family = "F";
    std::string out_path;
    std::string format = "text";
    Tolerance tol;

    void attach(CLI::App* cmd, bool with_format = true) {
        cmd->add_option("--in", in_path, "input state-set document");
        cmd->add_option("--dims", dims_text, "party dimensions, e.g. 3,3,3,4");
        cmd->add_option("--family", family, "family tag: E, O or F")
            ->check(CLI::IsMember({"E", "O", "F"}));
        cmd->add_option("--out", out_path, "output file (default stdout)");
        if (with_format)
            cmd->add_option("--format", format, "report format")
                ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--abs-zero", tol.abs_zero, "zero threshold for amplitudes");
        cmd->add_option("--rel-nullspace", tol.rel_nullspace,
                        "relative singular-value cutoff");
        cmd->add_option("--completeness-tol", tol.completeness,
                        "measurement completeness tolerance");
    }

    StateSetDocument load() const {
        if (!in_path.empty()) {
            std::ifstream in(in_path);
            if (!in) throw UsageError("cannot open '" + in_path + "'");
            std::stringstream buf;
            buf << in.rdbuf();
            try {
                return parse_document(buf.str());
            } catch (const std::runtime_error& e) {
                throw UsageError(e.what());
            }
        }
        if (dims_text.empty()) throw UsageError("need either --in or --dims/--family");
        const std::vector<int> dims = parse_dims(dims_text);
        StateSet set;
        try {
            if (family == "E") {
                for (int d : dims)
                    if (d != 3)
                        throw UsageError("family E is all-qutrit; use F for general dims");
                set = build_e(static_cast<int>(dims.size()));
            } else if (family == "O") {
                set = build_o(dims);
            } else {
                set = build_f(dims);
            }
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return document_from_set(set, false);
    }

    void emit(const std::string& text) const {
        if (out_path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(out_path);
        if (!out) throw UsageError("cannot write '" + out_path + "'");
        out << text;
    }

    int finish(const Report& report) const {
        emit(format == "json" ? report.render_json() : report.render_text());
        return report.all_pass() ? 0 : 1;
    }
};

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

void run_ortho_check(const StateSetDocument& doc, const Tolerance& tol, Report& report) {
    const auto states = document_states(doc);
    double worst = 0;
    std::pair<std::size_t, std::size_t> offender{0, 0};
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i + 1; j < states.size(); ++j) {
            const double overlap = std::abs(inner_product(states[i], states[j]));
            if (overlap > worst) {
                worst = overlap;
                offender = {i, j};
            }
        }
    const bool pass = worst <= tol.abs_zero;
    std::string detail = "max overlap " + fmt_double(worst) + " over " +
                         std::to_string(states.size()) + " states";
    if (!pass)
        detail += " (states " + std::to_string(offender.first) + ", " +
                  std::to_string(offender.second) + ")";
    report.add("orthogonality", pass, detail);
}

void run_cardinality_check(const StateSetDocument& doc, Report& report) {
    const long long expected = cardinality(doc.set.dims);
    long long total = 0;
    for (const auto& b : doc.set.blocks) total += b.expansion_size(doc.set.dims);
    report.add("cardinality", total == expected,
               std::to_string(total) + " states, closed form " + std::to_string(expected));
    if (doc.states)
        report.add("stored state count",
                   doc.states->size() == static_cast<std::size_t>(total),
                   std::to_string(doc.states->size()) + " stored");
}

void run_amplitude_check(const StateSetDocument& doc, const Tolerance& tol, Report& report) {
    if (!doc.states) return;
    const auto expanded = expand_set(doc.set);
    bool pass = expanded.size() == doc.states->size();
    std::size_t offender = 0;
    for (std::size_t i = 0; pass && i < expanded.size(); ++i)
        if (!states_equal((*doc.states)[i], expanded[i], tol.abs_zero)) {
            pass = false;
            offender = i;
        }
    report.add("stored amplitudes match the expansion", pass,
               pass ? std::to_string(doc.states->size()) + " states checked"
                    : "state " + std::to_string(offender) + " deviates");
}

void run_tiling_check(const StateSetDocument& doc, Report& report) {
    const TilingReport tiles = verify_tiling(doc.set);
    report.add("box tiling", tiles.ok(),
               std::to_string(tiles.covered_cells) + " cells covered, " +
                   std::to_string(tiles.middle_cells) + " middle cells open" +
                   (tiles.detail.empty() ? "" : "; " + tiles.detail));
}

void run_relations_check(const StateSetDocument& doc, Report& report) {
    const StateSet& set = doc.set;
    const int n = set.parties();
    bool all_qutrit = true;
    for (int d : set.dims) all_qutrit &= d == 3;
    if (!all_qutrit) {
        report.add("relations", true, "skipped: only defined for all-qutrit sets");
        return;
    }
    if (n % 2 == 0) {
        bool ok = set_equal(strip_subsystem(build_o(std::vector<int>(n + 1, 3)), n + 1), set);
        report.add("removal from the larger odd family", ok);
        if (n > 2) {
            const StateSet odd = build_o(std::vector<int>(n - 1, 3));
            bool flips = true;
            for (int i = 1; i <= n; ++i) flips &= set_equal(strip_flip(set, i), odd);
            report.add("strip-and-flip down to the odd family", flips);
        }
    } else {
        bool rotations = true;
        for (int j = 1; j <= n; ++j) rotations &= set_equal(cyclic_permute(set, j), set);
        report.add("cyclic symmetry", rotations);
        if (n > 2) {
            bool ok =
                set_equal(strip_subsystem(set, n), build_f(std::vector<int>(n - 1, 3)));
            report.add("removal to the smaller even family", ok);
        }
    }
}

int cmd_certify(const CommonOpts& opts, const std::string& method, const std::string& party,
                long long cap) {
    const StateSetDocument doc = opts.load();
    Report report;
    report.command = "certify " + method + " party=" + party;

    std::vector<int> parties;
    if (party == "all") {
        for (int i = 1; i <= doc.set.parties(); ++i) parties.push_back(i);
    } else {
        int i = 0;
        try {
            i = std::stoi(party);
        } catch (const std::exception&) {
            throw UsageError("bad party '" + party + "'");
        }
        if (i < 1 || i > doc.set.parties()) throw UsageError("party out of range");
        parties.push_back(i);
    }

    std::vector<int> numerically_trivial(static_cast<std::size_t>(doc.set.parties()) + 1, -1);
    if (method == "numerical" || method == "both") {
        const auto states = document_states(doc);
        for (int i : parties) {
            std::vector<int> x;
            for (int p = 1; p <= doc.set.parties(); ++p)
                if (p != i) x.push_back(p);
            long long dim_x = 1;
            for (int p : x) dim_x *= doc.set.dims[static_cast<std::size_t>(p - 1)];
            const std::string name = "numerical, bipartition " + std::to_string(i) + "|rest";
            if (dim_x > cap) {
                report.add(name, method == "both",
                           "skipped: joint dimension " + std::to_string(dim_x) +
                               " above cap " + std::to_string(cap) +
                               "; use the structural checker");
                continue;
            }
            const auto cs = assemble_constraints(states, x, doc.set.dims, cap, opts.tol);
            const auto space = solve_nullspace(cs, opts.tol);
            const bool trivial = space.verdict == SpaceVerdict::Trivial;
            numerically_trivial[static_cast<std::size_t>(i)] = trivial ? 1 : 0;
            std::ostringstream detail;
            detail << "dim " << dim_x << ", rows " << cs.rows.size() << ", nullspace "
                   << space.dimension << ", gap " << fmt_double(space.spectral_gap)
                   << ", residual " << fmt_double(space.residual);
            if (!space.note.empty()) detail << "; " << space.note;
            if (!trivial && space.witness) {
                const auto witness = param_to_matrix(*space.witness, dim_x);
                long long wp = 0, wq = 0;
                double best = 0;
                for (long long p = 0; p < dim_x; ++p)
                    for (long long q = 0; q < dim_x; ++q) {
                        const double mag =
                            std::abs(witness[static_cast<std::size_t>(p * dim_x + q)]);
                        if (mag > best) {
                            best = mag;
                            wp = p;
                            wq = q;
                        }
                    }
                detail << "; witness Hermitian with leading entry " << fmt_double(best)
                       << " at (" << wp << "," << wq << ")";
            }
            report.add(name, trivial, detail.str());
        }
    }
    if (method == "structural" || method == "both") {
        const auto boxes = set_boxes(doc.set);
        std::vector<BlockClass> classes;
        for (const auto& b : doc.set.blocks) classes.push_back(b.spec.cls);
        report.add("structural semantics", true, ConditionReport::tail_semantics);
        for (int i : parties) {
            std::vector<int> x;
            for (int p = 1; p <= doc.set.parties(); ++p)
                if (p != i) x.push_back(p);
            const auto cond = check_conditions(boxes, x, doc.set.dims, classes);
            std::ostringstream detail;
            detail << "tails " << (cond.basis_tails_covered ? "ok" : "FAIL") << ", covers "
                   << (cond.pi_for_every_block ? "ok" : "FAIL") << ", sequence "
                   << (cond.sequence_linked ? "ok" : "FAIL") << ", connected "
                   << (cond.connected ? "ok" : "FAIL");
            if (!cond.detail.empty()) detail << "; " << cond.detail;
            report.add("structural, bipartition " + std::to_string(i) + "|rest", cond.all(),
                       detail.str());
            if (method == "both" && numerically_trivial[static_cast<std::size_t>(i)] != -1)
                report.add("oracle agreement, bipartition " + std::to_string(i) + "|rest",
                           cond.all() ==
                               (numerically_trivial[static_cast<std::size_t>(i)] == 1),
                           "structural and numerical verdicts match");
        }
    }
    return opts.finish(report);
}

int cmd_simulate(const CommonOpts& opts, const std::string& state, const std::string& policy,
                 uint64_t seed, int trials) {
    const StateSetDocument doc = opts.load();
    Report report;
    report.command = "simulate policy=" + policy;
    const auto states = expand_set(doc.set);

    std::vector<int> ids;
    if (state == "all") {
        for (std::size_t i = 0; i < states.size(); ++i) ids.push_back(static_cast<int>(i));
    } else {
        int id = 0;
        try {
            id = std::stoi(state);
        } catch (const std::exception&) {
            throw UsageError("bad state id '" + state + "'");
        }
        if (id < 0 || id >= static_cast<int>(states.size()))
            throw UsageError("state id out of range (set has " +
                             std::to_string(states.size()) + " states)");
        ids.push_back(id);
    }
    const BranchPolicy bp =
        policy == "exhaustive" ? BranchPolicy::Exhaustive : BranchPolicy::Sampled;

    std::size_t leaves = 0, successes = 0;
    double worst_total = 1.0;
    bool all_ok = true;
    std::string failure;
    for (int id : ids) {
        try {
            const auto transcripts = run_protocol(doc.set, id, bp, seed, trials);
            leaves += transcripts.size();
            double total = 0;
            for (const auto& t : transcripts) {
                successes += t.success;
                total += t.probability;
                if (ids.size() == 1) {
                    // single-state runs export every transcript
                    std::ostringstream name, detail;
                    name << "branch (";
                    for (std::size_t k = 0; k < t.branch_offsets.size(); ++k)
                        name << (k ? "," : "") << t.branch_offsets[k] + 1;
                    name << ")";
                    detail << "identified "
                           << (t.identified_class == BlockClass::C ? "C" : "D") << " q={";
                    for (std::size_t k = 0; k < t.identified_q.size(); ++k)
                        detail << (k ? "," : "") << t.identified_q[k];
                    detail << "} tuple=(";
                    for (std::size_t k = 0; k < t.identified_tuple.size(); ++k)
                        detail << (k ? "," : "") << t.identified_tuple[k];
                    detail << ") p=" << fmt_double(t.probability) << ", "
                           << t.within_block_method << ", " << fmt_double(t.ebits.consumed)
                           << " ebits";
                    report.add(name.str(), t.success, detail.str());
                }
            }
            if (bp == BranchPolicy::Exhaustive) worst_total = std::min(worst_total, total);
        } catch (const ProtocolFailure& e) {
            all_ok = false;
            failure = "state " + std::to_string(id) + ": " + e.what();
            break;
        }
    }
    report.add("discrimination", all_ok && successes == leaves,
               all_ok ? std::to_string(successes) + "/" + std::to_string(leaves) +
                            " branches identified the input"
                      : failure);
    if (bp == BranchPolicy::Exhaustive)
        report.add("branch probabilities sum to one", std::abs(worst_total - 1.0) <= 1e-9,
                   "worst total " + fmt_double(worst_total));
    const EbitLedger costs = ebit_costs(doc.set.dims);
    report.add("entanglement cost", costs.consumed <= costs.teleport_baseline + 1e-9,
               fmt_double(costs.consumed) + " ebits vs teleportation baseline " +
                   fmt_double(costs.teleport_baseline));
    return opts.finish(report);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"strongly nonlocal product-set toolkit"};
    app.require_subcommand(1);

    CommonOpts gen_opts, info_opts, verify_opts, certify_opts, simulate_opts, tile_opts;

    auto* gen = app.add_subcommand("generate", "build a family and write its document");
    bool with_amplitudes = false;
    gen_opts.attach(gen, false);
    gen->add_flag("--with-amplitudes", with_amplitudes, "store expanded amplitudes");

    auto* info = app.add_subcommand("info", "summarize a set");
    info_opts.attach(info, false);

    auto* verify = app.add_subcommand("verify", "run structural verification checks");
    std::string checks = "all";
    verify_opts.attach(verify);
    verify->add_option("--checks", checks,
                       "comma list of ortho,cardinality,tiling,relations or all");

    auto* certify = app.add_subcommand("certify", "certify strong nonlocality");
    std::string method = "both", party = "all";
    long long cap = 128;
    certify_opts.attach(certify);
    certify->add_option("--method", method, "numerical, structural or both")
        ->check(CLI::IsMember({"numerical", "structural", "both"}));
    certify->add_option("--party", party, "bipartition index or 'all'");
    certify->add_option("--cap", cap, "joint-dimension cap for the numerical path");

    auto* simulate = app.add_subcommand("simulate", "run the discrimination protocol");
    std::string state = "all", policy = "exhaustive";
    uint64_t seed = 0;
    int trials = 500;
    simulate_opts.attach(simulate);
    simulate->add_option("--state", state, "state id or 'all'");
    simulate->add_option("--policy", policy, "exhaustive or sampled")
        ->check(CLI::IsMember({"exhaustive", "sampled"}));
    simulate->add_option("--seed", seed, "seed for the sampled policy");
    simulate->add_option("--trials", trials, "trials per state for the sampled policy");

    auto* tile = app.add_subcommand("tile", "draw the plane tile of a bipartition");
    int tile_party = 1;
    std::string tile_render = "ascii";
    tile_opts.attach(tile, false);
    tile->add_option("--party", tile_party, "row party of the diagram");
    tile->add_option("--format", tile_render, "svg or ascii")
        ->check(CLI::IsMember({"svg", "ascii"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            const StateSetDocument doc = gen_opts.load();
            gen_opts.emit(serialize_document(
                document_from_set(doc.set, with_amplitudes || doc.states.has_value())));
            return 0;
        }
        if (info->parsed()) {
            const StateSetDocument doc = info_opts.load();
            std::ostringstream os;
            long long total = 0;
            for (const auto& b : doc.set.blocks) total += b.expansion_size(doc.set.dims);
            os << "name: " << doc.set.name << "\nfamily: " << family_name(doc.set.family)
               << "\nparties: " << doc.set.parties() << "\ndims:";
            for (int d : doc.set.dims) os << " " << d;
            os << "\nblocks: " << doc.set.blocks.size() << "\nstates: " << total
               << "\nclosed-form size: " << cardinality(doc.set.dims) << "\n";
            const int n = doc.set.parties();
            if ((doc.set.family == Family::E || doc.set.family == Family::F) && n > 3)
                os << "strong nonlocality: claimed for this family (even n > 3)\n";
            else if (doc.set.family == Family::O && n > 3)
                os << "strong nonlocality: claimed for this family (odd n > 3)\n";
            else
                os << "strong nonlocality: no claim at this size\n";
            info_opts.emit(os.str());
            return 0;
        }
        if (verify->parsed()) {
            const StateSetDocument doc = verify_opts.load();
            Report report;
            report.command = "verify " + checks;
            const bool all = checks.find("all") != std::string::npos;
            if (all || checks.find("ortho") != std::string::npos)
                run_ortho_check(doc, verify_opts.tol, report);
            if (all || checks.find("cardinality") != std::string::npos)
                run_cardinality_check(doc, report);
            if (all) run_amplitude_check(doc, verify_opts.tol, report);
            if (all || checks.find("tiling") != std::string::npos)
                run_tiling_check(doc, report);
            if (all || checks.find("relations") != std::string::npos)
                run_relations_check(doc, report);
            if (report.checks.empty())
                throw UsageError("no recognized checks in '" + checks + "'");
            return verify_opts.finish(report);
        }
        if (certify->parsed()) return cmd_certify(certify_opts, method, party, cap);
        if (simulate->parsed())
            return cmd_simulate(simulate_opts, state, policy, seed, trials);
        if (tile->parsed()) {
            const StateSetDocument doc = tile_opts.load();
            const TileModel model = build_tile_model(doc.set, tile_party);
            tile_opts.emit(tile_render == "svg" ? render_svg(model) : render_ascii(model));
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
