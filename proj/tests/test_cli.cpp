// Copyright 2026 slcsim authors
// License: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "slc/serialize.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("slc_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SLCSIM_BIN) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) { return slc::read_text_file(path); }

}  // namespace

TEST_CASE("gen writes graph and companion class") {
    TempDir dir;
    CHECK(run_cli("gen star --delta 3 --out " + dir.file("s.json")) == 0);
    auto g = slc::load_graph(dir.file("s.json"));
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 3);
    auto hc = slc::load_class(dir.file("s.class.json"));
    CHECK(hc.size() == 3);
}

TEST_CASE("gen gnp is byte-identical across runs") {
    TempDir dir;
    CHECK(run_cli("gen gnp --n 6 --p 0.5 --seed 7 --out " + dir.file("a.json")) == 0);
    CHECK(run_cli("gen gnp --n 6 --p 0.5 --seed 7 --out " + dir.file("b.json")) == 0);
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
    CHECK(slurp(dir.file("a.class.json")) == slurp(dir.file("b.class.json")));
}

TEST_CASE("gen clique-plus extends the base graph") {
    TempDir dir;
    REQUIRE(run_cli("gen star --delta 2 --out " + dir.file("base.json")) == 0);
    CHECK(run_cli("gen clique-plus --base " + dir.file("base.json") + " --N 5 --out " +
                  dir.file("big.json")) == 0);
    CHECK(slc::load_graph(dir.file("big.json")).node_count() == 8);
}

TEST_CASE("dim reports and witness emission") {
    TempDir dir;
    REQUIRE(run_cli("gen complete --n 3 --out " + dir.file("k3.json")) == 0);
    CHECK(run_cli("dim --graph " + dir.file("k3.json") + " --class " +
                  dir.file("k3.class.json")) == 0);
    CHECK(run_cli("dim --graph " + dir.file("k3.json") + " --class " +
                  dir.file("k3.class.json") + " --witness --out " + dir.file("w.json")) == 0);
    auto w = slc::witness_from_json_text(slurp(dir.file("w.json")));
    CHECK(w.depth() == 1);
}

TEST_CASE("parse failures exit with code 2") {
    TempDir dir;
    slc::write_text_file(dir.file("bad.json"), "{broken");
    CHECK(run_cli("dim --graph " + dir.file("bad.json") + " --class " + dir.file("bad.json")) ==
          2);
    CHECK(run_cli("dim --graph " + dir.file("missing.json") + " --class " +
                  dir.file("missing.json")) == 2);
    // Duplicate class members are rejected on load.
    REQUIRE(run_cli("gen isolated --n 2 --out " + dir.file("g.json")) == 0);
    slc::write_text_file(dir.file("dup.json"),
                         "{\"n\": 2, \"members\": [[1,-1],[1,-1]]}");
    CHECK(run_cli("dim --graph " + dir.file("g.json") + " --class " + dir.file("dup.json")) ==
          2);
}

TEST_CASE("run against the lower-bound adversary reports the forced bound") {
    TempDir dir;
    REQUIRE(run_cli("gen star --delta 2 --out " + dir.file("s.json")) == 0);
    CHECK(run_cli("run --graph " + dir.file("s.json") + " --class " + dir.file("s.class.json") +
                  " --adversary --learner ssoa --out " + dir.file("t")) == 0);
    CHECK(slurp(dir.file("t.json")).find("\"pass\": true") != std::string::npos);
    // CSV has a header plus one row per round.
    auto csv = slurp(dir.file("t.csv"));
    CHECK(csv.rfind("t,x,v,y,pred,mistake,graph_idx,classifier_digest\n", 0) == 0);
}

TEST_CASE("run on a generated realizable sequence") {
    TempDir dir;
    REQUIRE(run_cli("gen isolated --n 3 --out " + dir.file("iso.json")) == 0);
    CHECK(run_cli("run --graph " + dir.file("iso.json") + " --class " +
                  dir.file("iso.class.json") + " --learner ssoa --T 6 --seed 11 --out " +
                  dir.file("r")) == 0);
    CHECK(slurp(dir.file("r.json")).find("\"opt_h\": 0") != std::string::npos);
}

TEST_CASE("agnostic honours the expert cap with exit code 3") {
    TempDir dir;
    REQUIRE(run_cli("gen star --delta 3 --out " + dir.file("s.json")) == 0);
    CHECK(run_cli("agnostic --graph " + dir.file("s.json") + " --class " +
                  dir.file("s.class.json") + " --T 8 --seed 3 --cap 3") == 3);
    CHECK(run_cli("agnostic --graph " + dir.file("s.json") + " --class " +
                  dir.file("s.class.json") + " --T 5 --seed 3 --out " + dir.file("a")) == 0);
    CHECK(slurp(dir.file("a.json")).find("\"experts\"") != std::string::npos);
}

TEST_CASE("SLC_CAP environment override") {
    TempDir dir;
    REQUIRE(run_cli("gen star --delta 3 --out " + dir.file("s.json")) == 0);
    const std::string cmd = std::string("SLC_CAP=3 ") + SLCSIM_BIN + " agnostic --graph " +
                            dir.file("s.json") + " --class " + dir.file("s.class.json") +
                            " --T 8 --seed 3 >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 3);
}

TEST_CASE("non-realizable input to a realizable-mode learner exits 4") {
    TempDir dir;
    REQUIRE(run_cli("gen isolated --n 2 --out " + dir.file("iso.json")) == 0);
    // Two contradicting labels at the same node defeat every hypothesis.
    slc::write_text_file(dir.file("seq.json"),
                         "{\"agents\": [[0,1],[0,-1],[0,1],[0,-1],[1,1],[1,-1]]}");
    CHECK(run_cli("run --graph " + dir.file("iso.json") + " --class " +
                  dir.file("iso.class.json") + " --seq " + dir.file("seq.json") +
                  " --learner soa") == 4);
}

TEST_CASE("graphclass and doubling over a two-member class") {
    TempDir dir;
    REQUIRE(run_cli("gen star --delta 2 --out " + dir.file("g0.json")) == 0);
    REQUIRE(run_cli("gen isolated --n 3 --out " + dir.file("g1.json")) == 0);
    slc::write_text_file(dir.file("gc.json"),
                         "{\"graphs\": [\"g0.json\", \"g1.json\"]}");
    slc::write_text_file(dir.file("seq.json"),
                         "{\"agents\": [[0,1],[1,-1],[2,-1]], \"graphs\": [0,0,0]}");
    CHECK(run_cli("graphclass --graphclass " + dir.file("gc.json") + " --class " +
                  dir.file("g0.class.json") + " --seq " + dir.file("seq.json") + " --out " +
                  dir.file("gcout")) == 0);
    CHECK(slurp(dir.file("gcout.json")).find("\"bounds\"") != std::string::npos);
    CHECK(run_cli("graphclass --graphclass " + dir.file("gc.json") + " --class " +
                  dir.file("g0.class.json") + " --seq " + dir.file("seq.json") +
                  " --budget-N 1 --out " + dir.file("gcb")) == 0);
    CHECK(run_cli("doubling --graphclass " + dir.file("gc.json") + " --class " +
                  dir.file("g0.class.json") + " --seq " + dir.file("seq.json") + " --out " +
                  dir.file("dbl")) == 0);
    CHECK(slurp(dir.file("dbl.json")).find("\"epochs\"") != std::string::npos);
}

TEST_CASE("demo-star small instance passes both checks") {
    TempDir dir;
    CHECK(run_cli("demo-star --delta 4 --trials 200 --seed 1 --out " + dir.file("d.json")) == 0);
    auto text = slurp(dir.file("d.json"));
    CHECK(text.find("\"deterministic_pass\": true") != std::string::npos);
    CHECK(text.find("\"randomized_pass\": true") != std::string::npos);
}

TEST_CASE("sweep emits one row per seed") {
    TempDir dir;
    CHECK(run_cli("sweep --kind gnp --n 4 --p 0.5 --T 5 --runs 6 --seed 3 --learner flip "
                  "--out " + dir.file("sweep.csv")) == 0);
    auto csv = slurp(dir.file("sweep.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);  // header + 6 rows
    CHECK(run_cli("sweep --kind gnp --n 4 --p 0.5 --T 5 --runs 6 --seed 3 --learner flip "
                  "--out " + dir.file("sweep2.csv")) == 0);
    CHECK(csv == slurp(dir.file("sweep2.csv")));
}
