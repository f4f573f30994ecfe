#include "stq/io.hpp"

#include "stq/decimal.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace stq {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : IoError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message)
    , line_(line)
    , column_(column)
{}

InvariantViolation::InvariantViolation(std::string tid, std::string detail)
    : IoError("trajectory '" + tid + "': " + detail)
    , tid_(std::move(tid))
    , detail_(std::move(detail))
{}

DuplicateKey::DuplicateKey(std::string tid, std::int64_t order)
    : IoError("duplicate point (" + tid + ", " + std::to_string(order) + ")")
    , tid_(std::move(tid))
    , order_(order)
{}

namespace {

struct Cell {
    std::string text;
    bool quoted = false;
};

struct Record {
    std::size_t line = 0;
    std::vector<Cell> cells;
};

// RFC 4180 style: fields may be double-quoted, quotes doubled inside.
std::vector<Record> read_records(const std::string& text)
{
    std::vector<Record> out;
    std::size_t line = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        Record rec;
        rec.line = line;
        Cell cell;
        bool done = false;
        while (!done) {
            if (i < n && text[i] == '"' && cell.text.empty() && !cell.quoted) {
                cell.quoted = true;
                ++i;
                while (true) {
                    if (i >= n)
                        throw ParseError(rec.line, rec.cells.size() + 1, "unterminated quoted field");
                    if (text[i] == '"') {
                        if (i + 1 < n && text[i + 1] == '"') {
                            cell.text += '"';
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    if (text[i] == '\n')
                        ++line;
                    cell.text += text[i++];
                }
                if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
                    throw ParseError(rec.line, rec.cells.size() + 1, "text after closing quote");
            }
            if (i >= n) {
                done = true;
            } else if (text[i] == ',') {
                ++i;
                rec.cells.push_back(std::move(cell));
                cell = Cell{};
                continue;
            } else if (text[i] == '\r' || text[i] == '\n') {
                if (text[i] == '\r' && i + 1 < n && text[i + 1] == '\n')
                    ++i;
                ++i;
                ++line;
                done = true;
            } else {
                if (cell.quoted)
                    throw ParseError(rec.line, rec.cells.size() + 1, "text after closing quote");
                cell.text += text[i++];
                continue;
            }
        }
        rec.cells.push_back(std::move(cell));
        const bool blank = rec.cells.size() == 1 && rec.cells[0].text.empty() && !rec.cells[0].quoted;
        if (!blank)
            out.push_back(std::move(rec));
    }
    return out;
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + p.string());
    out << text;
    if (!out)
        throw IoError("write failed for " + p.string());
}

void expect_header(const Record& rec, const std::vector<std::string>& prefix, bool exact)
{
    if (exact && rec.cells.size() != prefix.size())
        throw ParseError(rec.line, std::min(rec.cells.size(), prefix.size()) + 1, "header has wrong number of columns");
    for (std::size_t c = 0; c < prefix.size(); ++c) {
        if (c >= rec.cells.size() || rec.cells[c].text != prefix[c])
            throw ParseError(rec.line, c + 1, "expected header column '" + prefix[c] + "'");
    }
}

void expect_width(const Record& rec, std::size_t width)
{
    if (rec.cells.size() != width)
        throw ParseError(rec.line, std::min(rec.cells.size(), width) + 1,
                         "expected " + std::to_string(width) + " fields, got " + std::to_string(rec.cells.size()));
}

std::string require_tid(const Record& rec)
{
    if (rec.cells[0].text.empty())
        throw ParseError(rec.line, 1, "empty tid");
    return rec.cells[0].text;
}

std::int64_t require_int(const Record& rec, std::size_t col, const char* what)
{
    auto v = parse_integer(rec.cells[col].text);
    if (!v)
        throw ParseError(rec.line, col + 1, std::string("invalid ") + what + " '" + rec.cells[col].text + "'");
    return *v;
}

double require_double(const Record& rec, std::size_t col, const char* what)
{
    auto v = parse_decimal(rec.cells[col].text);
    if (!v)
        throw ParseError(rec.line, col + 1, std::string("invalid ") + what + " '" + rec.cells[col].text + "'");
    return *v;
}

bool needs_quotes(const std::string& s)
{
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

std::string field(const std::string& s) { return needs_quotes(s) ? quote(s) : s; }

// Inverse of infer_scalar: strings that would read back as something else
// are quoted, and integral floats keep a decimal point.
std::string scalar_cell(const Scalar& v)
{
    if (const auto* s = std::get_if<std::string>(&v)) {
        const bool ambiguous = s->empty() || !std::holds_alternative<std::string>(infer_scalar(*s));
        return ambiguous || needs_quotes(*s) ? quote(*s) : *s;
    }
    if (const auto* d = std::get_if<double>(&v)) {
        std::string t = format_decimal(*d);
        if (parse_integer(t))
            t += ".0";
        return t;
    }
    return scalar_to_string(v);
}

Scalar cell_scalar(const Cell& c) { return c.quoted ? Scalar(c.text) : infer_scalar(c.text); }

} // namespace

Scalar infer_scalar(const std::string& cell)
{
    if (auto i = parse_integer(cell))
        return *i;
    if (auto d = parse_decimal(cell))
        return *d;
    if (cell == "true")
        return true;
    if (cell == "false")
        return false;
    return cell;
}

Dataset parse_points_csv(const std::string& text)
{
    const auto records = read_records(text);
    if (records.empty())
        throw ParseError(1, 1, "missing header");
    expect_header(records[0], {"tid", "order", "x", "y", "tau"}, true);

    std::map<std::string, std::vector<TrajectoryPoint>> groups;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const Record& rec = records[r];
        expect_width(rec, 5);
        TrajectoryPoint p;
        const std::string tid = require_tid(rec);
        p.order = require_int(rec, 1, "order");
        p.x = require_double(rec, 2, "x");
        p.y = require_double(rec, 3, "y");
        p.tau = require_double(rec, 4, "tau");
        groups[tid].push_back(p);
    }

    Dataset d;
    for (auto& [tid, pts] : groups) {
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].order == pts[i - 1].order)
                throw DuplicateKey(tid, pts[i].order);
        try {
            d.trajectories.add(tid, Trajectory::from_points(std::move(pts)));
        } catch (const TrajectoryError& e) {
            throw InvariantViolation(tid, std::string(to_string(e.kind())) + ": " + e.what());
        }
    }
    return d;
}

std::filesystem::path props_path(const std::filesystem::path& points)
{
    return points.parent_path() / (points.stem().string() + ".props.csv");
}

std::filesystem::path pprops_path(const std::filesystem::path& points)
{
    return points.parent_path() / (points.stem().string() + ".pprops.csv");
}

Dataset ingest_csv(const std::filesystem::path& path)
{
    Dataset d = parse_points_csv(read_file(path));
    d.metadata["source"] = path.string();
    d.metadata["name"] = path.stem().string();

    std::map<std::string, PropertyRow> rows;
    auto row_for = [&](const std::string& tid) -> PropertyRow& {
        auto& r = rows[tid];
        r.tid = tid;
        return r;
    };

    const auto props = props_path(path);
    if (std::filesystem::exists(props)) {
        const auto records = read_records(read_file(props));
        if (records.empty())
            throw ParseError(1, 1, "missing header in " + props.filename().string());
        expect_header(records[0], {"tid"}, false);
        const auto& header = records[0].cells;
        std::set<std::string> seen;
        for (std::size_t r = 1; r < records.size(); ++r) {
            const Record& rec = records[r];
            expect_width(rec, header.size());
            const std::string tid = require_tid(rec);
            if (!seen.insert(tid).second)
                throw ParseError(rec.line, 1, "duplicate tid '" + tid + "' in trajectory properties");
            PropertyRow& row = row_for(tid);
            for (std::size_t c = 1; c < header.size(); ++c)
                if (!rec.cells[c].text.empty() || rec.cells[c].quoted)
                    row.trajectory_props[header[c].text] = cell_scalar(rec.cells[c]);
        }
    }

    const auto pprops = pprops_path(path);
    if (std::filesystem::exists(pprops)) {
        const auto records = read_records(read_file(pprops));
        if (records.empty())
            throw ParseError(1, 1, "missing header in " + pprops.filename().string());
        expect_header(records[0], {"tid", "order"}, false);
        const auto& header = records[0].cells;
        std::set<std::pair<std::string, std::int64_t>> seen;
        for (std::size_t r = 1; r < records.size(); ++r) {
            const Record& rec = records[r];
            expect_width(rec, header.size());
            const std::string tid = require_tid(rec);
            const std::int64_t order = require_int(rec, 1, "order");
            if (!seen.insert({tid, order}).second)
                throw DuplicateKey(tid, order);
            PropertyRow& row = row_for(tid);
            for (std::size_t c = 2; c < header.size(); ++c)
                if (!rec.cells[c].text.empty() || rec.cells[c].quoted)
                    row.point_props[header[c].text].push_back({order, cell_scalar(rec.cells[c])});
        }
    }

    for (auto& [tid, row] : rows)
        d.properties.add(std::move(row));
    try {
        d.properties.check_references(d.trajectories);
    } catch (const PropertyError& e) {
        throw InvariantViolation("", e.what());
    }
    return d;
}

std::string points_csv(const TrajectoriesRelation& rel)
{
    std::string out = "tid,order,x,y,tau\n";
    for (const auto& row : rel.rows()) {
        const std::string tid = field(row.tid);
        for (const auto& p : row.trajectory.points()) {
            out += tid + "," + std::to_string(p.order) + "," + format_decimal(p.x) + "," + format_decimal(p.y) + "," +
                   format_decimal(p.tau) + "\n";
        }
    }
    return out;
}

void export_csv(const Dataset& d, const std::filesystem::path& path)
{
    write_file(path, points_csv(d.trajectories));
    if (d.properties.empty())
        return;

    std::set<std::string> tnames;
    std::set<std::string> pnames;
    for (const auto& row : d.properties.rows()) {
        for (const auto& [k, v] : row.trajectory_props)
            tnames.insert(k);
        for (const auto& [k, v] : row.point_props)
            pnames.insert(k);
    }

    std::string props = "tid";
    for (const auto& n : tnames)
        props += "," + field(n);
    props += "\n";
    for (const auto& row : d.properties.rows()) {
        props += field(row.tid);
        for (const auto& n : tnames) {
            props += ",";
            auto it = row.trajectory_props.find(n);
            if (it != row.trajectory_props.end())
                props += scalar_cell(it->second);
        }
        props += "\n";
    }
    write_file(props_path(path), props);

    std::string pp = "tid,order";
    for (const auto& n : pnames)
        pp += "," + field(n);
    pp += "\n";
    for (const auto& row : d.properties.rows()) {
        std::map<std::int64_t, std::map<std::string, const Scalar*>> by_order;
        for (const auto& [name, values] : row.point_props)
            for (const auto& ov : values)
                by_order[ov.order][name] = &ov.value;
        for (const auto& [order, cells] : by_order) {
            pp += field(row.tid) + "," + std::to_string(order);
            for (const auto& n : pnames) {
                pp += ",";
                auto it = cells.find(n);
                if (it != cells.end())
                    pp += scalar_cell(*it->second);
            }
            pp += "\n";
        }
    }
    write_file(pprops_path(path), pp);
}

} // namespace stq
