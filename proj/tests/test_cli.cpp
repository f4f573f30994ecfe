#include <doctest.h>

#include "cli.hpp"
#include "stq/relations.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = STQ_FIXTURES;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = stq::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

const std::string kCrossingRegion = "R=2.65,0.6,4.5,1.75";

} // namespace

TEST_CASE("cli: validate and query")
{
    auto r = run({"validate", fixture("crossing_track.csv")});
    CHECK(r.code == 0);
    CHECK(r.out == "ok: 1 trajectories, 4 points\n");

    r = run({"query", fixture("crossing_track.csv"), "--predicate", "EXISTS p IN T: p INSIDE R", "--region", kCrossingRegion});
    CHECK(r.code == 0);
    CHECK(r.out == "");
    r = run({"query", fixture("crossing_track.csv"), "--predicate", "EXISTS p IN T: p INSIDE R", "--region", kCrossingRegion,
             "--strictness", "relaxed"});
    CHECK(r.out == "T\n");
    r = run({"query", fixture("crossing_track.csv"), "--predicate", "FORALL p IN T: p OUTSIDE R", "--region", kCrossingRegion});
    CHECK(r.out == "T\n");
    r = run({"query", fixture("crossing_track.csv"), "--predicate", "EXISTS p IN T: p INSIDE R", "--region", kCrossingRegion,
             "--strictness", "approx:uniform:10"});
    CHECK(r.out == "T\n");

    r = run({"query", fixture("three_tracks.csv"), "--predicate", "EXISTS p IN T: p WITHIN R AND p WITHIN I", "--region",
             "R=1.5,0.5,4.5,1.5", "--interval", "I=100,140", "--strictness", "relaxed"});
    CHECK(r.code == 0);
    CHECK(r.out.find("T_b\n") != std::string::npos);
    CHECK(r.out.find("T_c") == std::string::npos);
}

TEST_CASE("cli: classify, explain, catalog")
{
    auto r = run({"classify", "de9im", fixture("crossing_track.csv"), "--region", kCrossingRegion});
    CHECK(r.code == 0);
    CHECK(r.out == "T\tR031\n");
    r = run({"classify", "de9im", fixture("crossing_track.csv"), "--region", kCrossingRegion, "--strictness", "relaxed"});
    CHECK(r.out == "T\tR223\n");
    r = run({"classify", "allen", fixture("goose_track.csv"), "--interval", "I=100,140"});
    CHECK(r.code == 0);
    CHECK(r.out == "T0\tOverlappedBy\n");

    r = run({"explain", "--relation", "R179", "--region", kCrossingRegion});
    CHECK(r.code == 0);
    CHECK(r.out == "SELECT[2.65 < MIN(PROJECT[x](T)) AND 0.6 < MIN(PROJECT[y](T)) AND 4.5 > MAX(PROJECT[x](T)) AND "
                   "1.75 > MAX(PROJECT[y](T))](TRAJECTORIES)\n");
    r = run({"explain", "--relation", "precedes", "--interval", "window=100,140"});
    CHECK(r.out == "SELECT[MAX(PROJECT[tau](T)) < 100](TRAJECTORIES)\n");

    r = run({"catalog"});
    CHECK(r.code == 0);
    CHECK(r.out == stq::catalog_tsv());
    CHECK(r.out.rfind("label\tpredicate\tdescription\n", 0) == 0);
}

TEST_CASE("cli: engine and evaluator select the same trajectories")
{
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"R031", "strict"}, {"R179", "strict"}, {"R223", "strict"}, {"R247", "strict"}, {"R255", "strict"},
        {"R031", "relaxed"}, {"R223", "relaxed"}};
    for (const char* data : {"crossing_track.csv", "three_tracks.csv"}) {
        for (const auto& [label, s] : cases) {
            CAPTURE(label);
            const auto a = run({"query", fixture(data), "--relation", label, "--region", "Q=1.5,0.5,4.5,1.5",
                                "--strictness", s});
            const auto b = run({"exec-nf2", fixture(data), "--relation", label, "--region", "Q=1.5,0.5,4.5,1.5",
                                "--strictness", s});
            CHECK(a.code == 0);
            CHECK(b.code == 0);
            CHECK(a.out == b.out);
        }
        for (const char* label : {"Precedes", "Overlaps", "During", "PrecededBy", "OverlappedBy", "Contains"}) {
            CAPTURE(label);
            const auto a = run({"query", fixture(data), "--relation", label, "--interval", "I=105,145",
                                "--strictness", "relaxed"});
            const auto b = run({"exec-nf2", fixture(data), "--relation", label, "--interval", "I=105,145"});
            CHECK(a.out == b.out);
        }
    }
    const auto first = run({"classify", "de9im", fixture("three_tracks.csv"), "--region", kCrossingRegion});
    CHECK(run({"classify", "de9im", fixture("three_tracks.csv"), "--region", kCrossingRegion}).out == first.out);
}

TEST_CASE("cli: exit codes")
{
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"query", fixture("crossing_track.csv")}).code == 2);
    CHECK(run({"query", fixture("crossing_track.csv"), "--relation", "R999", "--region", kCrossingRegion}).code == 2);
    CHECK(run({"query", fixture("crossing_track.csv"), "--predicate", "pf WITHIN R", "--region", "R=1,2,3"}).code == 2);
    CHECK(run({"query", fixture("crossing_track.csv"), "--predicate", "pf WITHIN R", "--region", kCrossingRegion, "--strictness",
               "loose"})
              .code == 2);
    CHECK(run({"query", fixture("crossing_track.csv"), "--predicate", "pf WITHIN R", "--region", kCrossingRegion, "--strictness",
               "approx:nope"})
              .code == 2);
    CHECK(run({"explain", "--relation", "R095", "--region", kCrossingRegion}).code == 2);
    CHECK(run({"explain", "--relation", "R179", "--region", "A=0,0,2,2", "--region", "B=0,0,1,1"}).code == 2);

    auto r = run({"query", fixture("crossing_track.csv"), "--predicate", "pf WITHIN", "--region", kCrossingRegion});
    CHECK(r.code == 1);
    CHECK_FALSE(r.err.empty());
    r = run({"query", fixture("crossing_track.csv"), "--predicate", "pf WITHIN S", "--region", kCrossingRegion});
    CHECK(r.code == 1);
    CHECK(r.err.find("S") != std::string::npos);
    CHECK(run({"validate", "/nonexistent/x.csv"}).code == 1);

    const fs::path bad = fs::temp_directory_path() / "stq_cli_single.csv";
    {
        std::ofstream f(bad);
        f << "tid,order,x,y,tau\np,0,1,1,5\n";
    }
    r = run({"classify", "allen", bad.string(), "--interval", "I=0,10"});
    CHECK(r.code == 1);
    CHECK(r.err.find("p") != std::string::npos);
    fs::remove(bad);
}
