#include "stq/relations.hpp"

#include "stq/evaluator.hpp"

#include <algorithm>
#include <cctype>

namespace stq {

namespace {

struct De9imRow {
    De9imLabel label;
    std::string_view name;
    std::string_view text;
    std::string_view description;
    bool directed;
};

// The "pf, pl" shorthand is spelled out; a negated pair means both
// endpoints are not properly contained.
constexpr std::array<De9imRow, 19> kDe9im = {{
    {De9imLabel::R031, "R031", "FORALL p IN T: p OUTSIDE R", "disjoint: every point strictly outside", false},
    {De9imLabel::R095, "R095",
     "pf OUTSIDE R AND pl OUTSIDE R AND (EXISTS p IN TFL: p WITHIN R) AND (FORALL p IN TFL: NOT (p INSIDE R))",
     "touches the border from outside without entering", false},
    {De9imLabel::R179, "R179", "FORALL p IN T: p INSIDE R", "completely inside", false},
    {De9imLabel::R223, "R223", "pf OUTSIDE R AND pl OUTSIDE R AND (EXISTS p IN TFL: p INSIDE R)",
     "crosses: starts and ends outside, passes through the interior", false},
    {De9imLabel::R243, "R243",
     "pf INSIDE R AND pl INSIDE R AND (FORALL p IN TFL: p WITHIN R) AND (EXISTS p IN TFL: NOT (p INSIDE R))",
     "ends inside, touches the border from inside", false},
    {De9imLabel::R247, "R247", "pf INSIDE R AND pl INSIDE R AND (EXISTS p IN TFL: NOT (p WITHIN R))",
     "ends inside, leaves the region in between", false},
    {De9imLabel::R255, "R255", "pf INSIDE R AND pl OUTSIDE R", "starts inside, ends outside", true},
    {De9imLabel::R279, "R279",
     "pf WITHIN R AND pl WITHIN R AND NOT (pf INSIDE R) AND NOT (pl INSIDE R) AND (FORALL p IN TFL: p OUTSIDE R)",
     "ends on the border, runs outside in between", false},
    {De9imLabel::R287, "R287",
     "pf WITHIN R AND NOT (pf INSIDE R) AND pl OUTSIDE R AND (FORALL p IN TFL: p OUTSIDE R)",
     "starts on the border, runs outside", true},
    {De9imLabel::R339, "R339", "FORALL p IN T: p WITHIN R AND NOT (p INSIDE R)", "runs along the border", false},
    {De9imLabel::R343, "R343",
     "pf WITHIN R AND pl WITHIN R AND NOT (pf INSIDE R) AND NOT (pl INSIDE R) AND "
     "(FORALL p IN TFL: NOT (p INSIDE R)) AND (EXISTS p1 IN TFL: p1 WITHIN R) AND (EXISTS p2 IN TFL: p2 OUTSIDE R)",
     "ends on the border, runs outside and along the border", false},
    {De9imLabel::R351, "R351",
     "pf WITHIN R AND NOT (pf INSIDE R) AND pl OUTSIDE R AND (FORALL p IN TFL: NOT (p INSIDE R)) AND "
     "(EXISTS p1 IN TFL: p1 WITHIN R) AND (EXISTS p2 IN TFL: p2 OUTSIDE R)",
     "starts on the border, runs along the border and outside", true},
    {De9imLabel::R403, "R403",
     "pf WITHIN R AND pl WITHIN R AND NOT (pf INSIDE R) AND NOT (pl INSIDE R) AND (FORALL p IN TFL: p INSIDE R)",
     "ends on the border, runs through the interior", false},
    {De9imLabel::R435, "R435", "pf WITHIN R AND NOT (pf INSIDE R) AND pl INSIDE R AND (FORALL p IN TFL: p INSIDE R)",
     "starts on the border, runs inside", true},
    {De9imLabel::R467, "R467",
     "pf WITHIN R AND NOT (pf INSIDE R) AND pl INSIDE R AND (FORALL p IN TFL: p WITHIN R) AND "
     "(EXISTS p1 IN TFL: p1 INSIDE R) AND (EXISTS p2 IN TFL: NOT (p2 INSIDE R))",
     "starts on the border, runs inside and along the border", true},
    {De9imLabel::R471, "R471",
     "pf WITHIN R AND pl WITHIN R AND NOT (pf INSIDE R) AND NOT (pl INSIDE R) AND "
     "(EXISTS p1 IN TFL: p1 INSIDE R) AND (EXISTS p2 IN TFL: p2 OUTSIDE R)",
     "ends on the border, runs inside and outside", false},
    {De9imLabel::R479, "R479",
     "pf WITHIN R AND NOT (pf INSIDE R) AND pl OUTSIDE R AND (EXISTS p1 IN TFL: p1 INSIDE R) AND "
     "(EXISTS p2 IN TFL: p2 OUTSIDE R)",
     "starts on the border, runs inside, ends outside", true},
    {De9imLabel::R499, "R499",
     "pf WITHIN R AND pl WITHIN R AND NOT (pf INSIDE R) AND NOT (pl INSIDE R) AND (FORALL p IN TFL: p WITHIN R) AND "
     "(EXISTS p1 IN TFL: p1 INSIDE R) AND (EXISTS p2 IN TFL: NOT (p2 INSIDE R))",
     "ends on the border, runs inside and along the border", false},
    {De9imLabel::R503, "R503", "pf WITHIN R AND NOT (pf INSIDE R) AND pl INSIDE R AND (EXISTS p IN TFL: p OUTSIDE R)",
     "starts on the border, runs outside, ends inside", true},
}};

struct AllenRow {
    AllenLabel label;
    std::string_view name;
    std::string_view snake;
    std::string_view text;
    std::string_view description;
};

// Mirrored relations swap the roles of span and interval. Where an endpoint
// on the border is ambiguous (start or end of I), an inner point pins it.
constexpr std::array<AllenRow, 13> kAllen = {{
    {AllenLabel::Precedes, "Precedes", "precedes", "FORALL p IN T: p BEFORE I", "T ends before I starts"},
    {AllenLabel::Meets, "Meets", "meets", "pl WITHIN I AND NOT (pl INSIDE I) AND (FORALL p IN TFL: p BEFORE I)",
     "T ends where I starts"},
    {AllenLabel::Overlaps, "Overlaps", "overlaps", "pl INSIDE I AND (EXISTS p IN TFL: p BEFORE I)",
     "T starts before I and ends inside it"},
    {AllenLabel::Starts, "Starts", "starts", "pf WITHIN I AND NOT (pf INSIDE I) AND pl INSIDE I",
     "T starts with I and ends inside it"},
    {AllenLabel::During, "During", "during", "FORALL p IN T: p INSIDE I", "T lies strictly inside I"},
    {AllenLabel::Finishes, "Finishes", "finishes", "pl WITHIN I AND NOT (pl INSIDE I) AND pf INSIDE I",
     "T starts inside I and ends with it"},
    {AllenLabel::Equals, "Equals", "equals",
     "pf WITHIN I AND NOT (pf INSIDE I) AND pl WITHIN I AND NOT (pl INSIDE I)", "T and I coincide"},
    {AllenLabel::PrecededBy, "PrecededBy", "preceded_by", "FORALL p IN T: p AFTER I", "T starts after I ends"},
    {AllenLabel::MetBy, "MetBy", "met_by", "pf WITHIN I AND NOT (pf INSIDE I) AND (FORALL p IN TFL: p AFTER I)",
     "T starts where I ends"},
    {AllenLabel::OverlappedBy, "OverlappedBy", "overlapped_by", "pf INSIDE I AND (EXISTS p IN TFL: p AFTER I)",
     "T starts inside I and ends after it"},
    {AllenLabel::StartedBy, "StartedBy", "started_by",
     "pf WITHIN I AND NOT (pf INSIDE I) AND pl AFTER I AND (EXISTS p IN TFL: NOT (p AFTER I))",
     "T starts with I and ends after it"},
    {AllenLabel::Contains, "Contains", "contains", "pf BEFORE I AND pl AFTER I", "I lies strictly inside T"},
    {AllenLabel::FinishedBy, "FinishedBy", "finished_by",
     "pf BEFORE I AND pl WITHIN I AND NOT (pl INSIDE I) AND (EXISTS p IN TFL: NOT (p BEFORE I))",
     "T starts before I and ends with it"},
}};

const De9imRow& row(De9imLabel l) { return kDe9im[static_cast<std::size_t>(l)]; }
const AllenRow& row(AllenLabel l) { return kAllen[static_cast<std::size_t>(l)]; }

std::string lower(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

} // namespace

std::string_view to_string(De9imLabel l) { return row(l).name; }
std::string_view to_string(AllenLabel l) { return row(l).name; }

std::optional<De9imLabel> parse_de9im_label(std::string_view s)
{
    for (const auto& r : kDe9im)
        if (r.name == s || lower(r.name) == s)
            return r.label;
    return std::nullopt;
}

std::optional<AllenLabel> parse_allen_label(std::string_view s)
{
    const std::string l = lower(s);
    for (const auto& r : kAllen) {
        if (r.name == s || r.snake == l || lower(r.name) == l)
            return r.label;
    }
    // spellings used in prose
    if (l == "overlaps_with" || l == "overlaps-with")
        return AllenLabel::Overlaps;
    if (l == "is_during" || l == "is-during")
        return AllenLabel::During;
    return std::nullopt;
}

bool direction_sensitive(De9imLabel l) { return row(l).directed; }

std::string_view de9im_text(De9imLabel l) { return row(l).text; }
std::string_view allen_text(AllenLabel l) { return row(l).text; }

const PredicateAst& de9im_predicate(De9imLabel l)
{
    static const std::array<PredicateAst, 19> parsed = [] {
        std::array<PredicateAst, 19> out;
        for (std::size_t i = 0; i < kDe9im.size(); ++i)
            out[i] = parse_predicate(kDe9im[i].text);
        return out;
    }();
    return parsed[static_cast<std::size_t>(l)];
}

const PredicateAst& allen_predicate(AllenLabel l)
{
    static const std::array<PredicateAst, 13> parsed = [] {
        std::array<PredicateAst, 13> out;
        for (std::size_t i = 0; i < kAllen.size(); ++i)
            out[i] = parse_predicate(kAllen[i].text);
        return out;
    }();
    return parsed[static_cast<std::size_t>(l)];
}

std::vector<CatalogEntry> de9im_catalog()
{
    std::vector<CatalogEntry> out;
    for (const auto& r : kDe9im)
        out.push_back({std::string(r.name), std::string(r.text), std::string(r.description)});
    return out;
}

std::vector<CatalogEntry> allen_catalog()
{
    std::vector<CatalogEntry> out;
    for (const auto& r : kAllen)
        out.push_back({std::string(r.name), std::string(r.text), std::string(r.description)});
    return out;
}

std::string catalog_tsv()
{
    std::string out = "label\tpredicate\tdescription\n";
    for (const auto& entries : {de9im_catalog(), allen_catalog()})
        for (const auto& e : entries)
            out += e.label + "\t" + e.predicate + "\t" + e.description + "\n";
    return out;
}

std::vector<De9imLabel> classify_de9im(const Trajectory& t, const Region& r, const Strictness& s,
                                       bool normalize_orientation)
{
    EvalEnv env;
    env.bind("R", r);
    std::optional<Trajectory> rev;
    std::vector<De9imLabel> out;
    for (De9imLabel l : kAllDe9im) {
        const PredicateAst& ast = de9im_predicate(l);
        bool holds = evaluate(ast, t, env, s);
        if (!holds && normalize_orientation && direction_sensitive(l)) {
            if (!rev)
                rev = t.reversed();
            holds = evaluate(ast, *rev, env, s);
        }
        if (holds)
            out.push_back(l);
    }
    return out;
}

AllenLabel classify_allen_span(double tf, double tl, const Interval& i)
{
    if (!(tf < tl))
        throw RelationError(RelationError::Kind::DegenerateSpan, "trajectory time span is degenerate");
    const double ts = i.tau_s;
    const double te = i.tau_e;

    if (tl < ts)
        return AllenLabel::Precedes;
    if (tl == ts)
        return AllenLabel::Meets;
    if (tf > te)
        return AllenLabel::PrecededBy;
    if (tf == te)
        return AllenLabel::MetBy;
    // the spans now share more than a point
    if (tf < ts) {
        if (tl < te)
            return AllenLabel::Overlaps;
        return tl == te ? AllenLabel::FinishedBy : AllenLabel::Contains;
    }
    if (tf == ts) {
        if (tl < te)
            return AllenLabel::Starts;
        return tl == te ? AllenLabel::Equals : AllenLabel::StartedBy;
    }
    // ts < tf < te
    if (tl < te)
        return AllenLabel::During;
    return tl == te ? AllenLabel::Finishes : AllenLabel::OverlappedBy;
}

AllenLabel classify_allen(const Trajectory& t, const Interval& i)
{
    if (t.size() < 2)
        throw RelationError(RelationError::Kind::DegenerateSpan, "single-point trajectory has no time span");
    return classify_allen_span(first_point(t).tau, last_point(t).tau, i);
}

} // namespace stq
