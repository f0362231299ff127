#pragma once

// Text format v1:
//
//   colourful-config v1
//   d=<int>
//   colour 1
//   <d coordinates>        (d+1 lines)
//   colour 2
//   ...
//
// Lines starting with '#' are comments; blank lines are ignored.  Coordinates
// are written with 17 significant digits so a round trip is bit-exact.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cfp/types.hpp"

namespace cfp {

class ParseError : public Error {
  public:
    ParseError(int line_number, const std::string& message)
        : Error("line " + std::to_string(line_number) + ": " + message), line(line_number)
    {
    }
    int line;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace detail

inline ColourConfiguration parse_configuration(std::string_view text)
{
    struct Line {
        int number;
        std::string_view content;
    };
    std::vector<Line> lines;
    int number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        ++number;
        auto content = detail::trim(text.substr(pos, end - pos));
        if (!content.empty() && content.front() != '#') lines.push_back({number, content});
        if (end == text.size()) break;
        pos = end + 1;
    }

    std::size_t cur = 0;
    auto next = [&](const char* expected) -> const Line& {
        if (cur >= lines.size()) throw ParseError(number, std::string("unexpected end of input, expected ") + expected);
        return lines[cur++];
    };

    const auto& header = next("header");
    if (header.content != "colourful-config v1")
        throw ParseError(header.number, "expected header 'colourful-config v1'");

    const auto& dim_line = next("d=<int>");
    if (dim_line.content.substr(0, 2) != "d=") throw ParseError(dim_line.number, "expected 'd=<int>'");
    int d = 0;
    {
        auto v = detail::trim(dim_line.content.substr(2));
        auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
        if (ec != std::errc() || p != v.data() + v.size() || d < 1)
            throw ParseError(dim_line.number, "dimension must be a positive integer");
    }

    std::vector<Matrix> colours;
    for (int i = 1; i <= d + 1; ++i) {
        const auto& head = next("colour block");
        auto tokens = detail::split_ws(head.content);
        if (tokens.size() != 2 || tokens[0] != "colour" || tokens[1] != std::to_string(i))
            throw ParseError(head.number, "expected 'colour " + std::to_string(i) + "'");
        Matrix c(d, d + 1);
        for (int j = 0; j <= d; ++j) {
            const auto& row = next("point coordinates");
            auto coords = detail::split_ws(row.content);
            if (static_cast<int>(coords.size()) != d)
                throw ParseError(row.number, "expected " + std::to_string(d) + " coordinates, found " +
                                                 std::to_string(coords.size()));
            for (int k = 0; k < d; ++k) {
                double v = 0.0;
                auto tok = coords[static_cast<std::size_t>(k)];
                auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
                if (ec != std::errc() || p != tok.data() + tok.size())
                    throw ParseError(row.number, "non-numeric coordinate '" + std::string(tok) + "'");
                c(k, j) = v;
            }
        }
        colours.push_back(std::move(c));
    }
    if (cur != lines.size()) throw ParseError(lines[cur].number, "trailing content after the last colour block");

    bool unit = true;
    for (const auto& c : colours)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            if (std::abs(c.col(j).norm() - 1.0) > tol::unit_norm) unit = false;
    return ColourConfiguration(d, std::move(colours), unit);
}

inline std::string write_configuration(const ColourConfiguration& config,
                                       const std::vector<std::string>& comments = {})
{
    std::string out = "colourful-config v1\n";
    for (const auto& c : comments) out += "# " + c + "\n";
    out += "d=" + std::to_string(config.d) + "\n";
    char buf[40];
    for (int i = 0; i <= config.d; ++i) {
        out += "colour " + std::to_string(i + 1) + "\n";
        for (int j = 0; j <= config.d; ++j) {
            for (int k = 0; k < config.d; ++k) {
                std::snprintf(buf, sizeof buf, "%.17g", config.colour(i)(k, j));
                if (k) out += ' ';
                out += buf;
            }
            out += '\n';
        }
    }
    return out;
}

inline ColourConfiguration load_configuration(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_configuration(ss.str());
}

}  // namespace cfp
