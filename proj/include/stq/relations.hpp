#pragma once

#include "stq/core_model.hpp"
#include "stq/geometry.hpp"
#include "stq/predicate.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

/// \file
/// Topological (line vs. rectangle) and interval relations expressed as
/// predicates. Spatial formulas refer to a region named `R`, temporal ones
/// to an interval named `I`.

namespace stq {

enum class De9imLabel {
    R031, R095, R179, R223, R243, R247, R255, R279, R287, R339,
    R343, R351, R403, R435, R467, R471, R479, R499, R503
};

enum class AllenLabel {
    Precedes, Meets, Overlaps, Starts, During, Finishes, Equals,
    PrecededBy, MetBy, OverlappedBy, StartedBy, Contains, FinishedBy
};

inline constexpr std::array<De9imLabel, 19> kAllDe9im = {
    De9imLabel::R031, De9imLabel::R095, De9imLabel::R179, De9imLabel::R223, De9imLabel::R243,
    De9imLabel::R247, De9imLabel::R255, De9imLabel::R279, De9imLabel::R287, De9imLabel::R339,
    De9imLabel::R343, De9imLabel::R351, De9imLabel::R403, De9imLabel::R435, De9imLabel::R467,
    De9imLabel::R471, De9imLabel::R479, De9imLabel::R499, De9imLabel::R503};

inline constexpr std::array<AllenLabel, 13> kAllAllen = {
    AllenLabel::Precedes,   AllenLabel::Meets,        AllenLabel::Overlaps,  AllenLabel::Starts,
    AllenLabel::During,     AllenLabel::Finishes,     AllenLabel::Equals,    AllenLabel::PrecededBy,
    AllenLabel::MetBy,      AllenLabel::OverlappedBy, AllenLabel::StartedBy, AllenLabel::Contains,
    AllenLabel::FinishedBy};

std::string_view to_string(De9imLabel l);
std::string_view to_string(AllenLabel l);

/// Accepts "R179" and, for Allen labels, both the CamelCase name and the
/// lower-case spelling ("precedes", "overlapped_by", ...).
std::optional<De9imLabel> parse_de9im_label(std::string_view s);
std::optional<AllenLabel> parse_allen_label(std::string_view s);

/// Labels whose formula distinguishes the first from the last point.
bool direction_sensitive(De9imLabel l);

struct CatalogEntry {
    std::string label;
    std::string predicate;
    std::string description;
};

/// Canonical predicate text per label.
std::string_view de9im_text(De9imLabel l);
std::string_view allen_text(AllenLabel l);

/// Parsed predicate per label. Parsing happens once; the result is shared.
const PredicateAst& de9im_predicate(De9imLabel l);
const PredicateAst& allen_predicate(AllenLabel l);

std::vector<CatalogEntry> de9im_catalog();
std::vector<CatalogEntry> allen_catalog();

/// Tab-separated "label, predicate, description" rows with a header line.
std::string catalog_tsv();

class RelationError : public std::runtime_error {
public:
    enum class Kind { DegenerateSpan };

    RelationError(Kind kind, const std::string& what)
        : std::runtime_error(what)
        , kind_(kind)
    {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// Every label whose formula holds under `s`, in catalog order. With
/// `normalize_orientation`, direction-sensitive labels also match when the
/// reversed trajectory satisfies them. An empty result is legal.
std::vector<De9imLabel> classify_de9im(const Trajectory& t, const Region& r, const Strictness& s,
                                       bool normalize_orientation = true);

/// Allen relation between the trajectory's time span [tau_first, tau_last]
/// and the interval, by direct endpoint comparison. Throws
/// RelationError(DegenerateSpan) for single-point trajectories.
AllenLabel classify_allen(const Trajectory& t, const Interval& i);

/// Same as classify_allen, for a bare span (tau_first < tau_last).
AllenLabel classify_allen_span(double tau_first, double tau_last, const Interval& i);

} // namespace stq
