#include <doctest.h>

#include "generators.hpp"
#include "stq/evaluator.hpp"
#include "stq/nf2.hpp"

using namespace stq;
using namespace stq::nf2;

namespace {

Trajectory goose_track()
{
    return build_trajectory({{1.0, 0.5, 110}, {2.0, 1.0, 120}, {4.0, 1.5, 130}, {4.0, 1.5, 140}, {3.0, 0.5, 150}});
}

Relation single(const std::string& tid, const Trajectory& t)
{
    TrajectoriesRelation rel;
    rel.add(tid, t);
    return to_nf2(rel);
}

Nf2Error::Kind error_of(const RelExprPtr& e, const Relation& in)
{
    try {
        execute(e, in);
    } catch (const Nf2Error& err) {
        return err.kind();
    }
    FAIL("executed");
    return Nf2Error::Kind::InvalidSchema;
}

std::vector<std::string> sorted(std::vector<std::string> v)
{
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

TEST_CASE("coordinates of one trajectory")
{
    const Relation in = single("1", goose_track());
    // pi[x,y](mu_T(sigma[tid=1](pi[tid, pi[x,y](T)](TRAJECTORIES))))
    const auto e = project({"x", "y"},
                           unnest("T", select(compare(CompareOp::Eq, attr("tid"), literal(Value(std::string("1")))),
                                              project({keep("tid"), nest("T", project({"x", "y"}, nested_ref("T")))},
                                                      input()))));
    const Relation out = execute(e, in);
    REQUIRE(out.rows.size() == 5);
    REQUIRE(out.schema.size() == 2);
    const double xs[] = {1, 2, 4, 4, 3};
    const double ys[] = {0.5, 1, 1.5, 1.5, 0.5};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(std::get<double>(out.rows[i][0]) == xs[i]);
        CHECK(std::get<double>(out.rows[i][1]) == ys[i]);
    }
    CHECK(render(e) == "PROJECT[x, y](UNNEST[T](SELECT[tid = '1'](PROJECT[tid, T := PROJECT[x, y](T)](TRAJECTORIES))))");
}

TEST_CASE("operators on small relations")
{
    SUBCASE("projection of an empty relation keeps the schema transform")
    {
        const Relation empty = to_nf2(TrajectoriesRelation{});
        const Relation out = execute(project({keep("tid"), nest("P", project({"x"}, nested_ref("T")))}, input()), empty);
        CHECK(out.rows.empty());
        REQUIRE(out.schema.size() == 2);
        CHECK(out.schema.attributes[1].type == AttrType::Relation);
        CHECK(out.schema.attributes[1].nested->attributes[0].name == "x");
    }
    SUBCASE("unnest replicates outer attributes")
    {
        const Relation out = execute(unnest("T", input()), single("a", goose_track()));
        CHECK(out.rows.size() == 5);
        CHECK(out.schema.size() == 5);
        CHECK(std::get<std::string>(out.rows[3][0]) == "a");
    }
    SUBCASE("rename")
    {
        const Relation out = execute(project({nf2::rename("id", "tid")}, input()), single("a", goose_track()));
        CHECK(out.schema.attributes[0].name == "id");
    }
    SUBCASE("aggregates over an empty nested relation")
    {
        const Relation in = single("a", goose_track());
        auto none = select(compare(CompareOp::Gt, attr("x"), literal(100.0)), nested_ref("T"));
        auto min_x = aggregate(AggregateFn::Min, project({"x"}, none));
        CHECK(execute(select(compare(CompareOp::Lt, min_x, literal(1e9)), input()), in).rows.empty());
        CHECK(execute(select(compare(CompareOp::Ge, min_x, literal(-1e9)), input()), in).rows.empty());
        CHECK(execute(select(negate(compare(CompareOp::Lt, min_x, literal(0.0))), input()), in).rows.size() == 1);
        CHECK(execute(select(compare(CompareOp::Eq, aggregate(AggregateFn::Count, none), literal_int(0)), input()), in)
                  .rows.size() == 1);
    }
}

TEST_CASE("type checking")
{
    const Relation in = single("a", goose_track());
    CHECK(error_of(project({"nope"}, input()), in) == Nf2Error::Kind::UnknownAttribute);
    CHECK(error_of(select(compare(CompareOp::Eq, attr("tid"), literal_int(1)), input()), in) ==
          Nf2Error::Kind::TypeMismatch);
    CHECK(error_of(select(compare(CompareOp::Lt, aggregate(AggregateFn::Min, project({"tid"}, input())),
                                  literal(1.0)),
                          input()),
                   in) == Nf2Error::Kind::TypeMismatch);
    CHECK(error_of(unnest("tid", input()), in) == Nf2Error::Kind::TypeMismatch);
    CHECK(error_of(select(attr("x"), nested_ref("T")), in) == Nf2Error::Kind::UnknownAttribute);
    CHECK(error_of(select(compare(CompareOp::Lt, attr("x"), literal(1.0)), input()), in) ==
          Nf2Error::Kind::UnknownAttribute);
    CHECK(error_of(select(literal(1.0), input()), in) == Nf2Error::Kind::TypeMismatch);
    CHECK(error_of(project({keep("tid"), nf2::rename("tid", "tid")}, input()), in) == Nf2Error::Kind::InvalidSchema);
    CHECK_THROWS_AS(Relation::make(trajectories_schema(), {{std::string("a"), 1.0}}), Nf2Error);
    CHECK_NOTHROW(Relation::make(in.schema, in.rows));
}

TEST_CASE("segment join")
{
    const Relation segs = segment_join(single("T0", goose_track()));
    REQUIRE(segs.rows.size() == 4);
    CHECK(segs.schema.attributes[1].name == "order");
    CHECK(segs.schema.attributes[4].name == "x'");
    const Row& stationary = segs.rows[2];
    CHECK(std::get<std::int64_t>(stationary[1]) == 2);
    CHECK(value_equal(stationary[2], stationary[4]));
    CHECK(value_equal(stationary[3], stationary[5]));

    CHECK(segment_join(single("s", build_trajectory({{1, 1, 0}}))).rows.empty());
    const Relation line = segment_join(single("l", build_trajectory({{0, 0, 0}, {1, 1, 1}, {2, 2, 2}})));
    REQUIRE(line.rows.size() == 2);
    CHECK(value_equal(line.rows[0][4], line.rows[1][2]));
}

TEST_CASE("compiled expressions render like the published ones")
{
    const Region r = Region::make(2.65, 0.6, 4.5, 1.75);
    CHECK(render(compile_spatial(De9imLabel::R179, r, Strictness::strict())) ==
          "SELECT[2.65 < MIN(PROJECT[x](T)) AND 0.6 < MIN(PROJECT[y](T)) AND 4.5 > MAX(PROJECT[x](T)) AND "
          "1.75 > MAX(PROJECT[y](T))](TRAJECTORIES)");
    CHECK(render(compile_spatial(De9imLabel::R031, r, Strictness::strict())) ==
          "SELECT[COUNT(SELECT[2.65 < x AND 0.6 < y AND 4.5 > x AND 1.75 > y](T)) = 0](TRAJECTORIES)");
    CHECK(render(compile_temporal(AllenLabel::Precedes, Interval::make(100, 140))) ==
          "SELECT[MAX(PROJECT[tau](T)) < 100](TRAJECTORIES)");
    CHECK(render(compile_temporal(AllenLabel::During, Interval::make(100, 140))) ==
          "SELECT[MIN(PROJECT[tau](T)) > 100 AND MAX(PROJECT[tau](T)) < 140](TRAJECTORIES)");
    CHECK(render(compile_spatial(De9imLabel::R179, r, Strictness::strict())) ==
          render(compile_spatial(De9imLabel::R179, r, Strictness::relaxed())));
    CHECK(render(compile_spatial(De9imLabel::R031, r, Strictness::relaxed())).find("SEGMENT_MEETS[") !=
          std::string::npos);

    CHECK_THROWS_AS(compile_spatial(De9imLabel::R095, r, Strictness::strict()), Nf2Error);
    CHECK_THROWS_AS(compile_spatial(De9imLabel::R179, r, Strictness::approximated("uniform")), Nf2Error);
    CHECK_THROWS_AS(compile_temporal(AllenLabel::Meets, Interval::make(0, 1)), Nf2Error);
}

TEST_CASE("compiled selections on fixtures")
{
    SUBCASE("R255 selects the trajectory leaving the region")
    {
        TrajectoriesRelation rel;
        rel.add("leaves", build_trajectory({{0.5, 0.5, 0}, {2, 0.5, 1}}));
        rel.add("stays", build_trajectory({{0.5, 0.5, 0}, {0.6, 0.5, 1}}));
        const auto r = Region::make(0, 0, 1, 1);
        const auto got = tids(execute(compile_spatial(De9imLabel::R255, r, Strictness::strict()), to_nf2(rel)));
        CHECK(got == std::vector<std::string>{"leaves"});
        EvalEnv env;
        env.bind("R", r);
        CHECK(select_st(rel, de9im_predicate(De9imLabel::R255), env, Strictness::strict()).tids() == got);
    }
    SUBCASE("During selects the span strictly inside")
    {
        TrajectoriesRelation rel;
        rel.add("inside", build_trajectory({{0, 0, 105}, {1, 1, 130}}));
        rel.add("overlap", build_trajectory({{0, 0, 90}, {1, 1, 130}}));
        rel.add("touch", build_trajectory({{0, 0, 100}, {1, 1, 130}}));
        const auto i = Interval::make(100, 140);
        const auto got = tids(execute(compile_temporal(AllenLabel::During, i), to_nf2(rel)));
        CHECK(got == std::vector<std::string>{"inside"});
        CHECK(classify_allen(*rel.find("inside"), i) == AllenLabel::During);
    }
    SUBCASE("empty input")
    {
        CHECK(execute(compile_temporal(AllenLabel::Precedes, Interval::make(100, 140)), to_nf2(TrajectoriesRelation{}))
                  .rows.empty());
    }
}

TEST_CASE("algebraic identities")
{
    gen::Rng rng(31);
    for (int n = 0; n < 300; ++n) {
        const Relation in = to_nf2(gen::relation(rng, 12, 8));
        // outer projection commutes with unnesting a nested projection
        const auto nested_xy = [] { return nest("T", project({"x", "y"}, nested_ref("T"))); };
        const auto a = project({"tid", "x", "y"}, unnest("T", project({keep("tid"), nf2::rename("w", "tid"), nested_xy()}, input())));
        const auto b = unnest("T", project({keep("tid"), nested_xy()}, input()));
        REQUIRE(execute(a, in) == execute(b, in));

        // a conjunctive condition equals composed selections
        const double bound = gen::uniform(rng, 0, 10);
        const auto c1 = [&] { return compare(CompareOp::Lt, aggregate(AggregateFn::Min, project({"x"}, nested_ref("T"))), literal(bound)); };
        const auto c2 = [&] { return compare(CompareOp::Gt, aggregate(AggregateFn::Count, nested_ref("T")), literal_int(2)); };
        const Relation both = execute(select(conj({c1(), c2()}), input()), in);
        REQUIRE(both == execute(select(c1(), select(c2(), input())), in));
        REQUIRE(both == execute(select(c2(), select(c1(), input())), in));

        // selection keeps input order
        const auto kept = tids(both);
        const auto all = tids(in);
        std::size_t j = 0;
        for (const auto& t : kept) {
            while (j < all.size() && all[j] != t)
                ++j;
            REQUIRE(j < all.size());
        }
    }
}

TEST_CASE("engine agrees with the evaluator")
{
    gen::Rng rng(41);
    const De9imLabel spatial[] = {De9imLabel::R031, De9imLabel::R179, De9imLabel::R223, De9imLabel::R247,
                                  De9imLabel::R255};
    const AllenLabel temporal[] = {AllenLabel::Precedes, AllenLabel::Overlaps, AllenLabel::During,
                                   AllenLabel::PrecededBy, AllenLabel::OverlappedBy, AllenLabel::Contains};
    for (int n = 0; n < 60; ++n) {
        const auto rel = gen::relation(rng, 30, 12);
        const Relation in = to_nf2(rel);
        EvalEnv env;
        const Region r = gen::region(rng);
        const Interval i = gen::interval(rng, 0, 150);
        env.bind("R", r);
        env.bind("I", i);
        for (auto l : spatial) {
            for (const auto& s : {Strictness::strict(), Strictness::relaxed()}) {
                CAPTURE(to_string(l));
                const auto got = tids(execute(compile_spatial(l, r, s), in));
                REQUIRE(got == select_st(rel, de9im_predicate(l), env, s).tids());
            }
        }
        for (auto l : temporal) {
            CAPTURE(to_string(l));
            const auto got = tids(execute(compile_temporal(l, i), in));
            REQUIRE(got == select_st(rel, allen_predicate(l), env, Strictness::relaxed()).tids());
        }
    }
}
