#include "rfid/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "rfid/error.hpp"

namespace rfid {

namespace {

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw Error("write failed for " + path.string());
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size())
                out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

bool parse_count(std::string_view token, std::size_t& out)
{
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::string format_number(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc())
        throw Error("number formatting failed");
    return std::string(buf, ptr);
}

bool parse_number(std::string_view token, double& out)
{
    if (token.empty())
        return false;
    if (token.front() == '+')
        token.remove_prefix(1);
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out, std::chars_format::general);
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

GridField parse_grid(std::string_view text, const std::string& origin)
{
    const auto lines = lines_of(text);
    std::size_t lineno = 0;
    while (lineno < lines.size() && split_ws(lines[lineno]).empty())
        ++lineno;
    if (lineno == lines.size())
        throw ParseError(origin, 1, "empty file, expected RFGRID header");

    const auto header = split_ws(lines[lineno]);
    const std::size_t header_line = lineno + 1;
    if (header.size() != 8 || header[0] != "RFGRID" || header[1] != "1")
        throw ParseError(origin, header_line,
                         "malformed header, expected 'RFGRID 1 <nx> <ny> <dx> <dy> <origin_x> <origin_y>'");

    GridSpec spec;
    if (!parse_count(header[2], spec.nx) || !parse_count(header[3], spec.ny))
        throw ParseError(origin, header_line, "malformed header, nx and ny must be integers");
    double* reals[] = {&spec.dx, &spec.dy, &spec.origin_x, &spec.origin_y};
    for (int k = 0; k < 4; ++k) {
        if (!parse_number(header[4 + k], *reals[k]))
            throw ParseError(origin, header_line,
                             "malformed header, bad number '" + std::string(header[4 + k]) + "'");
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ParseError(origin, header_line, std::string("invalid header: ") + e.what());
    }

    std::vector<double> values;
    values.reserve(spec.size());
    std::size_t last_line = header_line;
    for (++lineno; lineno < lines.size(); ++lineno) {
        const auto tokens = split_ws(lines[lineno]);
        if (tokens.empty())
            continue;
        last_line = lineno + 1;
        for (auto tok : tokens) {
            double v;
            if (!parse_number(tok, v))
                throw ParseError(origin, lineno + 1,
                                 "invalid value '" + std::string(tok) + "' (values must be finite decimals)");
            if (values.size() == spec.size())
                throw ParseError(origin, lineno + 1,
                                 "too many values, header declares " + std::to_string(spec.size()));
            values.push_back(v);
        }
    }
    if (values.size() != spec.size()) {
        throw ParseError(origin, last_line,
                         "value count mismatch: header declares " + std::to_string(spec.nx) + "x" +
                             std::to_string(spec.ny) + " = " + std::to_string(spec.size()) +
                             " values, found " + std::to_string(values.size()) + " (missing " +
                             std::to_string(spec.size() - values.size()) + ")");
    }
    return GridField(spec, std::move(values));
}

std::string format_grid(const GridField& field)
{
    const auto& s = field.spec();
    std::string out = "RFGRID 1 " + std::to_string(s.nx) + " " + std::to_string(s.ny) + " " +
                      format_number(s.dx) + " " + format_number(s.dy) + " " +
                      format_number(s.origin_x) + " " + format_number(s.origin_y) + "\n";
    for (std::size_t j = 0; j < s.ny; ++j) {
        for (std::size_t i = 0; i < s.nx; ++i) {
            if (i)
                out += ' ';
            out += format_number(field.at(i, j));
        }
        out += '\n';
    }
    return out;
}

GridField load_grid(const std::filesystem::path& path)
{
    return parse_grid(read_file(path), path.string());
}

void save_grid(const GridField& field, const std::filesystem::path& path)
{
    write_file(path, format_grid(field));
}

ScatteredField load_scattered(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    const auto lines = lines_of(text);
    ScatteredField data;
    bool header_seen = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        std::string_view line = lines[n];
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.remove_suffix(1);
        if (line.empty())
            continue;
        if (!header_seen) {
            if (line != "x,y,value")
                throw ParseError(path.string(), n + 1, "expected CSV header 'x,y,value'");
            header_seen = true;
            continue;
        }
        ScatteredPoint p;
        double* dst[] = {&p.x, &p.y, &p.value};
        std::size_t start = 0;
        for (int c = 0; c < 3; ++c) {
            const auto comma = line.find(',', start);
            const bool last = c == 2;
            if (last != (comma == std::string_view::npos))
                throw ParseError(path.string(), n + 1, "expected exactly 3 comma-separated columns");
            auto tok = line.substr(start, last ? std::string_view::npos : comma - start);
            while (!tok.empty() && tok.front() == ' ')
                tok.remove_prefix(1);
            while (!tok.empty() && tok.back() == ' ')
                tok.remove_suffix(1);
            if (!parse_number(tok, *dst[c]))
                throw ParseError(path.string(), n + 1, "invalid number '" + std::string(tok) + "'");
            start = comma + 1;
        }
        data.points.push_back(p);
    }
    if (!header_seen)
        throw ParseError(path.string(), 1, "expected CSV header 'x,y,value'");
    return data;
}

void save_scattered(const ScatteredField& data, const std::filesystem::path& path)
{
    std::string out = "x,y,value\n";
    for (const auto& p : data.points)
        out += format_number(p.x) + "," + format_number(p.y) + "," + format_number(p.value) + "\n";
    write_file(path, out);
}

}  // namespace rfid
