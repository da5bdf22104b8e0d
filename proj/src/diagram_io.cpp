#include "ncchern/exactseq.hpp"

#include <cctype>
#include <sstream>

namespace ncchern {

namespace {

// Cursor over text that tracks 1-based line and column.
class Cursor {
public:
    Cursor(const std::string& text, std::size_t line, std::size_t column)
        : text_(text), line_(line), column_(column) {}

    bool done() const { return pos_ >= text_.size(); }
    char peek() const { return done() ? '\0' : text_[pos_]; }

    char take() {
        const char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void skip_space() {
        while (!done() && std::isspace(static_cast<unsigned char>(peek())))
            take();
    }

    void expect(char c) {
        skip_space();
        if (peek() != c)
            fail(std::string("expected '") + c + "'" + (done() ? " but input ended" : ", found '" + std::string(1, peek()) + "'"));
        take();
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, line_, column_); }

    std::size_t pos() const { return pos_; }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_;
    std::size_t column_;
};

Integer parse_integer(Cursor& c) {
    c.skip_space();
    std::string digits;
    if (c.peek() == '-' || c.peek() == '+')
        digits += c.take();
    while (std::isdigit(static_cast<unsigned char>(c.peek())))
        digits += c.take();
    if (digits.empty() || digits == "-" || digits == "+")
        c.fail("expected an integer");
    if (digits[0] == '+')
        digits.erase(0, 1);
    return Integer(digits);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_labels(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

struct PendingArrow {
    IntMatrix matrix;
    std::size_t line = 0;
};

} // namespace

IntMatrix parse_matrix(const std::string& text, std::size_t line, std::size_t column) {
    Cursor c(text, line, column);
    c.expect('[');
    std::vector<std::vector<Integer>> rows;
    c.skip_space();
    if (c.peek() == ']') {
        c.take();
    } else {
        for (;;) {
            c.expect('[');
            std::vector<Integer> row;
            c.skip_space();
            if (c.peek() != ']') {
                for (;;) {
                    row.push_back(parse_integer(c));
                    c.skip_space();
                    if (c.peek() == ',') {
                        c.take();
                        continue;
                    }
                    break;
                }
            }
            c.expect(']');
            if (!rows.empty() && row.size() != rows.front().size())
                c.fail("row has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(rows.front().size()));
            rows.push_back(std::move(row));
            c.skip_space();
            if (c.peek() == ',') {
                c.take();
                continue;
            }
            c.expect(']');
            break;
        }
    }
    c.skip_space();
    if (!c.done())
        c.fail("unexpected trailing input");
    const std::size_t r = rows.size();
    const std::size_t n = r == 0 ? 0 : rows.front().size();
    std::vector<Integer> entries;
    entries.reserve(r * n);
    for (auto& row : rows)
        for (auto& v : row)
            entries.push_back(std::move(v));
    return IntMatrix(r, n, std::move(entries));
}

SixTermDiagram parse_diagram(const std::string& text) {
    SixTermDiagram d;
    std::array<bool, 6> node_seen{}, arrow_seen{};
    std::array<std::optional<PendingArrow>, 6> pending;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        const std::size_t lead = raw.find_first_not_of(" \t\r\n");
        if (line[0] != '[')
            throw ParseError("expected a '[node i]' or '[arrow i]' header", line_no, 1);
        const std::size_t close = line.find(']');
        if (close == std::string::npos)
            throw ParseError("unterminated section header", line_no, 1);
        std::istringstream header(line.substr(1, close - 1));
        std::string kind;
        long index = -1;
        header >> kind >> index;
        if ((kind != "node" && kind != "arrow") || index < 0 || index > 5 || !header.eof())
            throw ParseError("bad section header '" + line.substr(0, close + 1) + "'", line_no, 1);
        const auto i = static_cast<std::size_t>(index);
        auto& seen = kind == "node" ? node_seen : arrow_seen;
        if (seen[i])
            throw ParseError(kind + " " + std::to_string(i) + " defined twice", line_no, 1);
        seen[i] = true;

        // key=value pairs; a matrix value may contain spaces up to its closing bracket.
        std::size_t pos = close + 1;
        bool unknown = false;
        bool has_group = false;
        while (true) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
            if (pos >= line.size())
                break;
            const std::size_t key_start = pos;
            while (pos < line.size() && line[pos] != '=' && !std::isspace(static_cast<unsigned char>(line[pos])))
                ++pos;
            const std::string key = line.substr(key_start, pos - key_start);
            const std::size_t column = lead + key_start + 1;
            if (pos >= line.size() || line[pos] != '=') {
                if (key == "unknown") {
                    unknown = true;
                    continue;
                }
                throw ParseError("expected key=value, found '" + key + "'", line_no, column);
            }
            ++pos;
            std::string value;
            if (key == "matrix") {
                int depth = 0;
                const std::size_t vstart = pos;
                for (; pos < line.size(); ++pos) {
                    if (line[pos] == '[')
                        ++depth;
                    else if (line[pos] == ']' && --depth == 0) {
                        ++pos;
                        break;
                    }
                }
                value = line.substr(vstart, pos - vstart);
            } else if (pos < line.size() && line[pos] == '"') {
                const std::size_t end = line.find('"', pos + 1);
                if (end == std::string::npos)
                    throw ParseError("unterminated quoted value", line_no, column);
                value = line.substr(pos + 1, end - pos - 1);
                pos = end + 1;
            } else {
                const std::size_t vstart = pos;
                while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos])))
                    ++pos;
                // `group=Z + Z/2`: later tokens belong to the group until the next key.
                while (key == "group") {
                    std::size_t next = pos;
                    while (next < line.size() && std::isspace(static_cast<unsigned char>(line[next])))
                        ++next;
                    std::size_t end = next;
                    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end])))
                        ++end;
                    const std::string token = line.substr(next, end - next);
                    if (token.empty() || token.find('=') != std::string::npos || token == "unknown")
                        break;
                    pos = end;
                }
                value = line.substr(vstart, pos - vstart);
            }

            if (key == "name") {
                (kind == "node" ? d.labels : d.arrow_labels)[i] = value;
            } else if (kind == "node" && key == "group") {
                has_group = true;
                if (value == "unknown" || value == "?")
                    unknown = true;
                else
                    try {
                        d.nodes[i] = parse_group(value);
                    } catch (const ParseError& e) {
                        throw ParseError(e.what(), line_no, column);
                    }
            } else if (kind == "node" && key == "generators") {
                d.generator_labels[i] = split_labels(value);
            } else if (kind == "arrow" && key == "matrix") {
                const std::size_t mcol = column + 7;
                pending[i] = PendingArrow{parse_matrix(value, line_no, mcol), line_no};
            } else {
                throw ParseError("unknown key '" + key + "' for " + kind, line_no, column);
            }
        }
        if (kind == "node" && unknown && d.nodes[i])
            throw ParseError("node " + std::to_string(i) + " is both known and unknown", line_no, 1);
        if (kind == "node" && !unknown && !has_group)
            throw ParseError("node " + std::to_string(i) + " needs group=... or unknown", line_no, 1);
        if (kind == "arrow" && unknown == pending[i].has_value())
            throw ParseError("arrow " + std::to_string(i) + " needs exactly one of matrix=... or unknown", line_no, 1);
    }

    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        if (!pending[i])
            continue;
        const std::size_t j = SixTermDiagram::next(i);
        if (!d.nodes[i] || !d.nodes[j])
            throw ValidationError("arrow " + std::to_string(i) + " (line " + std::to_string(pending[i]->line) +
                                  ") has a matrix but node " + std::to_string(d.nodes[i] ? j : i) + " is unknown");
        d.arrows[i] = GroupHom(*d.nodes[i], *d.nodes[j], pending[i]->matrix);
    }
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i)
        if (!d.generator_labels[i].empty() && d.nodes[i] &&
            d.generator_labels[i].size() != d.nodes[i]->generator_count())
            throw ValidationError("node " + std::to_string(i) + " lists " +
                                  std::to_string(d.generator_labels[i].size()) + " generator names for " +
                                  d.nodes[i]->to_string());
    d.validate();
    return d;
}

std::string format_diagram(const SixTermDiagram& d) {
    std::ostringstream os;
    auto quoted = [](const std::string& s) {
        return s.find_first_of(" \t") == std::string::npos ? s : "\"" + s + "\"";
    };
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        os << "[node " << i << "]";
        if (!d.labels[i].empty())
            os << " name=" << quoted(d.labels[i]);
        if (d.nodes[i]) {
            std::string g = d.nodes[i]->to_string();
            std::erase(g, ' ');
            os << " group=" << g;
            if (!d.generator_labels[i].empty()) {
                std::string joined;
                for (std::size_t k = 0; k < d.generator_labels[i].size(); ++k)
                    joined += (k ? "," : "") + d.generator_labels[i][k];
                os << " generators=" << quoted(joined);
            }
        } else {
            os << " unknown";
        }
        os << '\n';
    }
    for (std::size_t i = 0; i < SixTermDiagram::size; ++i) {
        os << "[arrow " << i << "]";
        if (!d.arrow_labels[i].empty())
            os << " name=" << quoted(d.arrow_labels[i]);
        if (d.arrows[i])
            os << " matrix=" << d.arrows[i]->matrix().to_string();
        else
            os << " unknown";
        os << '\n';
    }
    return os.str();
}

} // namespace ncchern
