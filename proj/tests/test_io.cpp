#include <doctest.h>

#include "stq/io.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace stq;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = STQ_FIXTURES;

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    out << text;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("stq_io_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

template <class E>
E raised(const std::string& text)
{
    try {
        parse_points_csv(text);
    } catch (const E& e) {
        return e;
    }
    FAIL("no exception for: " << text);
    throw;
}

} // namespace

TEST_CASE("fixture dataset loads with properties")
{
    const Dataset d = ingest_csv(kFixtures / "goose_track.csv");
    REQUIRE(d.trajectories.size() == 1);
    const Trajectory& t = *d.trajectories.find("T0");
    REQUIRE(t.size() == 5);
    CHECK(t[0].tau == 110);
    CHECK(t[4].x == 3);
    CHECK(d.metadata.at("name") == "goose_track");

    const PropertyRow* row = d.properties.find("T0");
    REQUIRE(row);
    CHECK(std::get<std::string>(row->trajectory_props.at("species")) == "goose");

    const auto runs = segment_property_view(d.properties, "T0", "movement_type");
    REQUIRE(runs.size() == 2);
    CHECK(runs[0] == PropertyRun{0, 1, std::string("walking")});
    CHECK(runs[1] == PropertyRun{2, 4, std::string("flying")});
}

TEST_CASE("export reproduces the fixture files byte for byte")
{
    TempDir tmp;
    const Dataset d = ingest_csv(kFixtures / "goose_track.csv");
    const fs::path out = tmp.path / "goose_track.csv";
    export_csv(d, out);
    CHECK(slurp(out) == slurp(kFixtures / "goose_track.csv"));
    CHECK(slurp(props_path(out)) == slurp(kFixtures / "goose_track.props.csv"));
    CHECK(slurp(pprops_path(out)) == slurp(kFixtures / "goose_track.pprops.csv"));

    const Dataset back = ingest_csv(out);
    CHECK(back.trajectories == d.trajectories);
    CHECK(back.properties == d.properties);
}

TEST_CASE("rows in any order")
{
    const Dataset d = parse_points_csv("tid,order,x,y,tau\n"
                                       "b,1,1,1,2\n"
                                       "a,1,5,5,20\n"
                                       "b,0,0,0,1\n"
                                       "a,0,4,4,10\n");
    CHECK(d.trajectories.tids() == std::vector<std::string>{"a", "b"});
    CHECK(d.trajectories.find("a")->operator[](0).x == 4);
    CHECK(points_csv(d.trajectories) == "tid,order,x,y,tau\na,0,4,4,10\na,1,5,5,20\nb,0,0,0,1\nb,1,1,1,2\n");
}

TEST_CASE("malformed input")
{
    SUBCASE("parse errors carry a position")
    {
        auto e = raised<ParseError>("tid,order,x,y,tau\nT,0,1,zz,3\n");
        CHECK(e.line() == 2);
        CHECK(e.column() == 4);
        e = raised<ParseError>("tid,order,x,y\n");
        CHECK(e.line() == 1);
        e = raised<ParseError>("tid,order,x,y,tau\nT,0,1,2\n");
        CHECK(e.line() == 2);
        e = raised<ParseError>("tid,order,x,y,tau\nT,0,1,2,3\nT,1.5,1,2,4\n");
        CHECK(e.line() == 3);
        CHECK(e.column() == 2);
        e = raised<ParseError>("tid,order,x,y,tau\n\"T,0,1,2,3\n");
        CHECK(e.line() == 2);
        CHECK_THROWS_AS(parse_points_csv(""), ParseError);
    }
    SUBCASE("time must increase")
    {
        const auto e = raised<InvariantViolation>("tid,order,x,y,tau\nT,0,0,0,5\nT,1,1,1,5\n");
        CHECK(e.tid() == "T");
        CHECK(e.detail().find("NonMonotoneTime") != std::string::npos);
        CHECK(raised<InvariantViolation>("tid,order,x,y,tau\nT,0,0,0,5\nT,2,1,1,6\n").detail().find("OrderGap") !=
              std::string::npos);
    }
    SUBCASE("duplicate keys")
    {
        const auto e = raised<DuplicateKey>("tid,order,x,y,tau\nT,0,0,0,5\nT,0,1,1,6\n");
        CHECK(e.tid() == "T");
        CHECK(e.order() == 0);
    }
    SUBCASE("property files referencing missing points")
    {
        TempDir tmp;
        spit(tmp.path / "d.csv", "tid,order,x,y,tau\nT,0,0,0,1\n");
        spit(tmp.path / "d.pprops.csv", "tid,order,kind\nT,3,x\n");
        CHECK_THROWS_AS(ingest_csv(tmp.path / "d.csv"), InvariantViolation);
        spit(tmp.path / "d.pprops.csv", "tid,order,kind\nT,0,x\nT,0,y\n");
        CHECK_THROWS_AS(ingest_csv(tmp.path / "d.csv"), DuplicateKey);
    }
    CHECK_THROWS_AS(ingest_csv("/nonexistent/nowhere.csv"), IoError);
}

TEST_CASE("empty dataset")
{
    TempDir tmp;
    export_csv(Dataset{}, tmp.path / "e.csv");
    CHECK(slurp(tmp.path / "e.csv") == "tid,order,x,y,tau\n");
    CHECK_FALSE(fs::exists(props_path(tmp.path / "e.csv")));
    CHECK(ingest_csv(tmp.path / "e.csv").trajectories.empty());
}

TEST_CASE("scalar inference and quoting")
{
    CHECK(std::holds_alternative<std::int64_t>(infer_scalar("42")));
    CHECK(std::holds_alternative<double>(infer_scalar("4.5")));
    CHECK(std::holds_alternative<bool>(infer_scalar("true")));
    CHECK(std::holds_alternative<std::string>(infer_scalar("True")));
    CHECK(std::holds_alternative<std::string>(infer_scalar("goose")));

    TempDir tmp;
    Dataset d;
    d.trajectories.add("a,b", build_trajectory({{0.1, 0.2, 0.3}, {1e-7, -2.5, 1e9}}));
    d.trajectories.add("q\"t", build_trajectory({{0, 0, 0}}));
    PropertyRow row;
    row.tid = "a,b";
    row.trajectory_props["count"] = std::int64_t(3);
    row.trajectory_props["weight"] = 2.0;
    row.trajectory_props["flag"] = false;
    row.trajectory_props["label"] = std::string("17");
    row.trajectory_props["note"] = std::string("say \"hi\", twice");
    row.trajectory_props["blank"] = std::string("");
    row.point_props["kind"] = {{0, std::string("true")}, {1, 0.5}};
    d.properties.add(row);

    const fs::path p = tmp.path / "q.csv";
    export_csv(d, p);
    const Dataset back = ingest_csv(p);
    CHECK(back.trajectories == d.trajectories);
    CHECK(back.properties == d.properties);

    const Dataset again = [&] {
        export_csv(back, tmp.path / "r.csv");
        return ingest_csv(tmp.path / "r.csv");
    }();
    CHECK(slurp(tmp.path / "r.csv") == slurp(p));
    CHECK(slurp(props_path(tmp.path / "r.csv")) == slurp(props_path(p)));
    CHECK(again.properties == d.properties);
}
