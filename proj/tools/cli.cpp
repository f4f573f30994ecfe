#include "cli.hpp"

#include "stq/decimal.hpp"
#include "stq/evaluator.hpp"
#include "stq/io.hpp"
#include "stq/nf2.hpp"
#include "stq/predicate.hpp"
#include "stq/relations.hpp"

#include <CLI11.hpp>

#include <optional>
#include <sstream>

namespace stq::cli {

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_numbers(const std::string& spec, const std::string& list, std::size_t count)
{
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = list.find(',', start);
        const std::string part = list.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        auto v = parse_decimal(part);
        if (!v)
            throw UsageError("invalid number '" + part + "' in '" + spec + "'");
        out.push_back(*v);
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    if (out.size() != count)
        throw UsageError("'" + spec + "' needs " + std::to_string(count) + " comma-separated numbers");
    return out;
}

std::pair<std::string, std::string> split_binding(const std::string& spec)
{
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("expected NAME=values, got '" + spec + "'");
    return {spec.substr(0, eq), spec.substr(eq + 1)};
}

struct Bindings {
    EvalEnv env;
    std::vector<std::string> regions;
    std::vector<std::string> intervals;
};

Bindings make_bindings(const std::vector<std::string>& regions, const std::vector<std::string>& intervals)
{
    Bindings b;
    try {
        for (const auto& spec : regions) {
            auto [name, list] = split_binding(spec);
            if (b.env.find(name))
                throw UsageError("name '" + name + "' bound twice");
            auto v = parse_numbers(spec, list, 4);
            b.env.bind(name, Region::make(v[0], v[1], v[2], v[3]));
            b.regions.push_back(name);
        }
        for (const auto& spec : intervals) {
            auto [name, list] = split_binding(spec);
            if (b.env.find(name))
                throw UsageError("name '" + name + "' bound twice");
            auto v = parse_numbers(spec, list, 2);
            b.env.bind(name, Interval::make(v[0], v[1]));
            b.intervals.push_back(name);
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return b;
}

// Catalog formulas name their region R and their interval I. A single
// binding of the right kind stands in for it whatever it is called.
EvalEnv label_env(const Bindings& b, bool spatial)
{
    const std::string wanted = spatial ? "R" : "I";
    const auto& names = spatial ? b.regions : b.intervals;
    EvalEnv env;
    const Binding* hit = b.env.find(wanted);
    if (hit && (std::holds_alternative<Region>(*hit) == spatial)) {
        std::visit([&](const auto& v) { env.bind(wanted, v); }, *hit);
        return env;
    }
    if (names.size() != 1)
        throw UsageError(std::string("relation needs exactly one ") + (spatial ? "--region" : "--interval"));
    std::visit([&](const auto& v) { env.bind(wanted, v); }, *b.env.find(names.front()));
    return env;
}

Region only_region(const Bindings& b) { return std::get<Region>(*label_env(b, true).find("R")); }
Interval only_interval(const Bindings& b) { return std::get<Interval>(*label_env(b, false).find("I")); }

Strictness parse_strictness(const std::string& text)
{
    auto s = Strictness::parse(text);
    if (!s)
        throw UsageError("invalid strictness '" + text + "'");
    if (s->mode == Strictness::Mode::Approximated && !StrategyRegistry::builtin().contains(s->strategy))
        throw UsageError("unknown approximation strategy '" + s->strategy + "'");
    return *s;
}

struct LabelRef {
    std::optional<De9imLabel> spatial;
    std::optional<AllenLabel> temporal;
};

LabelRef parse_label(const std::string& text)
{
    LabelRef r;
    r.spatial = parse_de9im_label(text);
    if (!r.spatial)
        r.temporal = parse_allen_label(text);
    if (!r.spatial && !r.temporal)
        throw UsageError("unknown relation '" + text + "'");
    return r;
}

void print_tids(std::ostream& out, const std::vector<std::string>& tids)
{
    for (const auto& t : tids)
        out << t << '\n';
}

std::vector<std::string> relation_tids(const TrajectoriesRelation& r) { return r.tids(); }

nf2::RelExprPtr compile(const LabelRef& label, const Bindings& b, const Strictness& s)
{
    if (label.spatial)
        return nf2::compile_spatial(*label.spatial, only_region(b), s);
    return nf2::compile_temporal(*label.temporal, only_interval(b));
}

struct Options {
    std::string data;
    std::string predicate;
    std::string relation;
    std::vector<std::string> regions;
    std::vector<std::string> intervals;
    std::string strictness = "strict";
    bool no_normalize = false;
};

void add_ranges(CLI::App* cmd, Options& o)
{
    cmd->add_option("--region", o.regions, "NAME=x_min,y_min,x_max,y_max")->type_name("SPEC");
    cmd->add_option("--interval", o.intervals, "NAME=tau_s,tau_e")->type_name("SPEC");
}

int dispatch(CLI::App& app, Options& o, CLI::App* validate_cmd, CLI::App* query, CLI::App* de9im, CLI::App* allen,
             CLI::App* explain, CLI::App* exec, CLI::App* catalog, std::ostream& out, std::ostream& err)
{
    (void)app;
    if (catalog->parsed()) {
        out << catalog_tsv();
        return kOk;
    }
    if (explain->parsed()) {
        const Bindings b = make_bindings(o.regions, o.intervals);
        out << nf2::render(compile(parse_label(o.relation), b, parse_strictness(o.strictness))) << '\n';
        return kOk;
    }

    // every remaining command reads a dataset; check flags before loading
    Bindings b = make_bindings(o.regions, o.intervals);
    const Strictness s = parse_strictness(o.strictness);
    std::optional<LabelRef> label;
    if (!o.relation.empty())
        label = parse_label(o.relation);
    if (query->parsed() && o.predicate.empty() == o.relation.empty())
        throw UsageError("query needs exactly one of --predicate and --relation");

    const Dataset d = ingest_csv(o.data);

    if (validate_cmd->parsed()) {
        std::size_t points = 0;
        for (const auto& row : d.trajectories.rows())
            points += row.trajectory.size();
        out << "ok: " << d.trajectories.size() << " trajectories, " << points << " points\n";
        return kOk;
    }
    if (query->parsed()) {
        PredicateAst ast;
        EvalEnv env;
        if (label) {
            ast = label->spatial ? de9im_predicate(*label->spatial) : allen_predicate(*label->temporal);
            env = label_env(b, label->spatial.has_value());
        } else {
            ast = parse_predicate(o.predicate);
            env = b.env;
            const auto diags = stq::validate(ast, env.kinds());
            if (!diags.empty()) {
                for (const auto& dg : diags)
                    err << "error: " << dg.message << '\n';
                return kFailure;
            }
        }
        print_tids(out, relation_tids(select_st(d.trajectories, ast, env, s)));
        return kOk;
    }
    if (de9im->parsed()) {
        const Region r = only_region(b);
        for (const auto& row : d.trajectories.rows()) {
            const auto labels = classify_de9im(row.trajectory, r, s, !o.no_normalize);
            out << row.tid << '\t';
            for (std::size_t i = 0; i < labels.size(); ++i)
                out << (i ? "," : "") << to_string(labels[i]);
            out << '\n';
        }
        return kOk;
    }
    if (allen->parsed()) {
        const Interval iv = only_interval(b);
        int rc = kOk;
        for (const auto& row : d.trajectories.rows()) {
            try {
                out << row.tid << '\t' << to_string(classify_allen(row.trajectory, iv)) << '\n';
            } catch (const RelationError& e) {
                err << "error: " << row.tid << ": " << e.what() << '\n';
                rc = kFailure;
            }
        }
        return rc;
    }
    if (exec->parsed()) {
        if (!label)
            throw UsageError("exec-nf2 needs --relation");
        const nf2::Relation result = nf2::execute(compile(*label, b, s), nf2::to_nf2(d.trajectories));
        print_tids(out, nf2::tids(result));
        return kOk;
    }
    throw UsageError("no command given");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Spatio-temporal trajectory queries"};
    app.name("stq");
    app.require_subcommand(1);
    Options o;

    auto* validate = app.add_subcommand("validate", "Load a dataset and report invariant violations");
    validate->add_option("data", o.data, "points CSV")->required();

    auto* query = app.add_subcommand("query", "Select trajectories satisfying a predicate");
    query->add_option("data", o.data, "points CSV")->required();
    query->add_option("--predicate", o.predicate, "predicate text");
    query->add_option("--relation", o.relation, "catalog relation label instead of a predicate");
    add_ranges(query, o);
    query->add_option("--strictness", o.strictness, "strict | relaxed | approx:<name>[:k]");

    auto* classify = app.add_subcommand("classify", "Classify every trajectory");
    classify->require_subcommand(1);
    auto* de9im = classify->add_subcommand("de9im", "Topological relations against a region");
    de9im->add_option("data", o.data, "points CSV")->required();
    add_ranges(de9im, o);
    de9im->add_option("--strictness", o.strictness, "strict | relaxed | approx:<name>[:k]");
    de9im->add_flag("--no-normalize", o.no_normalize, "do not match direction-sensitive labels in reverse");
    auto* allen = classify->add_subcommand("allen", "Interval relation of the time span");
    allen->add_option("data", o.data, "points CSV")->required();
    add_ranges(allen, o);

    auto* explain = app.add_subcommand("explain", "Print the algebra expression for a relation");
    explain->add_option("--relation", o.relation, "relation label")->required();
    add_ranges(explain, o);
    explain->add_option("--strictness", o.strictness, "strict | relaxed");

    auto* exec = app.add_subcommand("exec-nf2", "Select trajectories through the algebra engine");
    exec->add_option("data", o.data, "points CSV")->required();
    exec->add_option("--relation", o.relation, "relation label")->required();
    add_ranges(exec, o);
    exec->add_option("--strictness", o.strictness, "strict | relaxed");

    auto* catalog = app.add_subcommand("catalog", "Print all relation labels with their predicates");

    std::vector<std::string> argv_store;
    argv_store.push_back("stq");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        return dispatch(app, o, validate, query, de9im, allen, explain, exec, catalog, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const PredicateError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    } catch (const nf2::Nf2Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const EvalError& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

} // namespace stq::cli
