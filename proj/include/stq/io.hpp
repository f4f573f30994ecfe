#pragma once

#include "stq/core_model.hpp"

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

/// \file
/// CSV persistence. A dataset is a points file with header
/// `tid,order,x,y,tau` plus optional siblings `<stem>.props.csv`
/// (`tid,<name>,...`) and `<stem>.pprops.csv` (`tid,order,<name>,...`).
/// An empty property cell means the property is absent for that row.

namespace stq {

struct Dataset {
    TrajectoriesRelation trajectories;
    PropertyRelation properties;
    std::map<std::string, std::string> metadata;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public IoError {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class InvariantViolation : public IoError {
public:
    InvariantViolation(std::string tid, std::string detail);

    const std::string& tid() const noexcept { return tid_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string tid_;
    std::string detail_;
};

class DuplicateKey : public IoError {
public:
    DuplicateKey(std::string tid, std::int64_t order);

    const std::string& tid() const noexcept { return tid_; }
    std::int64_t order() const noexcept { return order_; }

private:
    std::string tid_;
    std::int64_t order_;
};

/// Rows may come in any order; trajectories are assembled sorted by
/// (tid, order). Property files are read when present next to `path`.
Dataset ingest_csv(const std::filesystem::path& path);

/// Parses points CSV text (no property files).
Dataset parse_points_csv(const std::string& text);

/// Writes the points file and, when the dataset has properties, both
/// sibling property files. Floats use the shortest round-trip form.
void export_csv(const Dataset& d, const std::filesystem::path& path);

std::string points_csv(const TrajectoriesRelation& rel);

/// Sibling file names for a points file.
std::filesystem::path props_path(const std::filesystem::path& points);
std::filesystem::path pprops_path(const std::filesystem::path& points);

/// Property cell text -> int, float, bool ("true"/"false") or string.
Scalar infer_scalar(const std::string& cell);

} // namespace stq
