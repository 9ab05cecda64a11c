#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "sqn/document.hpp"

using namespace sqn;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SQN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("generate then verify round trip") {
    CHECK(run_cli("generate --dims 3,3,3,3 --family E --out cli_e4.json") == 0);
    CHECK(run_cli("verify --in cli_e4.json --checks all") == 0);
    CHECK(run_cli("info --in cli_e4.json") == 0);

    // re-serializing through the tool is byte-identical
    CHECK(run_cli("generate --in cli_e4.json --out cli_e4_again.json") == 0);
    CHECK(slurp("cli_e4.json") == slurp("cli_e4_again.json"));

    CHECK(run_cli("generate --dims 3,3,3,4 --family F --with-amplitudes --out cli_f.json") ==
          0);
    CHECK(run_cli("verify --in cli_f.json --checks ortho,cardinality --format json") == 0);
}

TEST_CASE("corrupted amplitudes are caught with the offending pair") {
    StateSetDocument doc = document_from_set(build_f({3, 3}), true);
    // leak the first factor onto a level outside its box
    (*doc.states)[3].factors[0].amps[1] += cx{0.25, 0.0};
    std::ofstream out("cli_corrupt.json");
    out << serialize_document(doc);
    out.close();
    CHECK(run_cli("verify --in cli_corrupt.json --checks ortho") == 1);
    // cardinality alone still passes: the block structure is intact
    CHECK(run_cli("verify --in cli_corrupt.json --checks cardinality") == 0);
}

TEST_CASE("usage errors exit with code two") {
    CHECK(run_cli("verify") == 2);                                     // no input
    CHECK(run_cli("generate --dims 3,3,3 --family E") == 2);           // odd party count
    CHECK(run_cli("generate --dims 3,4 --family E") == 2);             // E must be qutrit
    CHECK(run_cli("simulate --dims 3,3 --family F --state 99") == 2);  // id out of range
    CHECK(run_cli("certify --dims 3,3 --family F --party 7") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("verify --in does_not_exist.json") == 2);
}

TEST_CASE("certification exit codes distinguish capped from certified") {
    CHECK(run_cli("certify --dims 3,3,3,3,3,3 --family E --method structural") == 0);
    // the numerical path alone cannot certify above its cap
    CHECK(run_cli("certify --dims 3,3,3,3,3,3 --family E --method numerical --party 1") == 1);
    // a single tractable party certifies numerically
    CHECK(run_cli("certify --dims 3,3,3,3 --family E --method numerical --party 1") == 0);
}

TEST_CASE("simulation of one state and the tile renderers") {
    CHECK(run_cli("simulate --dims 3,3,3,3 --family E --state 0 --policy exhaustive") == 0);
    CHECK(run_cli("simulate --dims 3,3 --family F --policy sampled --seed 5 --trials 20") ==
          0);
    CHECK(run_cli("tile --dims 3,3 --family F --format ascii --out cli_tile.txt") == 0);
    CHECK(run_cli("tile --dims 3,3,3,3 --family E --format svg --out cli_tile.svg") == 0);
    const std::string svg = slurp("cli_tile.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("reports are bitwise reproducible") {
    CHECK(run_cli("certify --dims 3,3,3,3 --family E --method both --party 2 "
                  "--format json --out cli_rep_a.json") == 0);
    CHECK(run_cli("certify --dims 3,3,3,3 --family E --method both --party 2 "
                  "--format json --out cli_rep_b.json") == 0);
    CHECK(slurp("cli_rep_a.json") == slurp("cli_rep_b.json"));
}

TEST_CASE("documents without blocks still certify from stored states") {
    // the 27-state computational product basis as a bare document
    StateSetDocument doc;
    doc.set.name = "basis";
    doc.set.family = Family::Derived;
    doc.set.dims = {3, 3, 3};
    std::vector<ProductState> states;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                ProductState s;
                for (int level : {a, b, c}) {
                    LocalVector f;
                    f.dim = 3;
                    f.amps.assign(3, cx{0, 0});
                    f.amps[static_cast<std::size_t>(level)] = 1.0;
                    s.factors.push_back(std::move(f));
                }
                states.push_back(std::move(s));
            }
    doc.states = std::move(states);
    std::ofstream out("cli_basis.json");
    out << serialize_document(doc);
    out.close();
    CHECK(run_cli("certify --in cli_basis.json --method numerical --party 1") == 1);
}

TEST_SUITE_END();
