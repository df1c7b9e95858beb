#include "dirspec/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dirspec {

using json = nlohmann::ordered_json;

namespace {

std::vector<std::vector<std::string>> tokenize_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::vector<std::string> toks;
        std::string t;
        while (ls >> t) toks.push_back(t);
        if (!toks.empty()) rows.push_back(std::move(toks));
    }
    return rows;
}

Rat parse_cell(const std::string& tok, size_t row, size_t col) {
    try {
        return rat_from_string(tok);
    } catch (const std::invalid_argument& e) {
        throw ParseError("row " + std::to_string(row + 1) + ", column " + std::to_string(col + 1) +
                         ": " + e.what());
    }
}

IntGrid require_integer(const RatGrid& g) {
    IntGrid out(g.prime());
    for (int y = 0; y < g.p(); ++y)
        for (int x = 0; x < g.p(); ++x) {
            const Rat& v = g.at(x, y);
            if (v.get_den() != 1)
                throw ParseError("row " + std::to_string(y + 1) + ", column " +
                                 std::to_string(x + 1) + ": expected an integer, got " +
                                 rat_to_string(v));
            if (!v.get_num().fits_slong_p())
                throw ParseError("integer entry out of range");
            out.at(x, y) = v.get_num().get_si();
        }
    return out;
}

}  // namespace

std::string write_ascii(const RatGrid& g) {
    std::ostringstream os;
    for (int y = 0; y < g.p(); ++y) {
        for (int x = 0; x < g.p(); ++x) {
            if (x) os << ' ';
            os << rat_to_string(g.at(x, y));
        }
        os << '\n';
    }
    return os.str();
}

std::string write_ascii(const IntGrid& g) { return write_ascii(RatGrid::from(g)); }

RatGrid parse_ascii_grid(const std::string& text) {
    auto rows = tokenize_rows(text);
    if (rows.empty()) throw ParseError("empty grid input");
    size_t n = rows.size();
    int p;
    try {
        p = Prime(static_cast<int>(n)).value();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("grid has ") + std::to_string(n) + " rows: " + e.what());
    }
    RatGrid g{Prime(p)};
    for (size_t r = 0; r < n; ++r) {
        if (rows[r].size() != n)
            throw ParseError("row " + std::to_string(r + 1) + ": expected " + std::to_string(n) +
                             " values, got " + std::to_string(rows[r].size()));
        for (size_t c = 0; c < n; ++c)
            g.at(static_cast<int>(c), static_cast<int>(r)) = parse_cell(rows[r][c], r, c);
    }
    return g;
}

IntGrid parse_ascii_int_grid(const std::string& text) {
    return require_integer(parse_ascii_grid(text));
}

namespace {

json grid_to_json(const RatGrid& g) {
    json rows = json::array();
    for (int y = 0; y < g.p(); ++y) {
        json row = json::array();
        for (int x = 0; x < g.p(); ++x) {
            const Rat& v = g.at(x, y);
            if (v.get_den() == 1 && v.get_num().fits_slong_p())
                row.push_back(v.get_num().get_si());
            else
                row.push_back(rat_to_string(v));
        }
        rows.push_back(std::move(row));
    }
    return json{{"p", g.p()}, {"grid", std::move(rows)}};
}

}  // namespace

std::string write_json(const RatGrid& g) { return grid_to_json(g).dump(2) + "\n"; }

std::string write_json(const IntGrid& g) { return write_json(RatGrid::from(g)); }

RatGrid parse_json_grid(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("p") || !j.contains("grid"))
        throw ParseError("JSON grid needs fields \"p\" and \"grid\"");
    if (!j["p"].is_number_integer()) throw ParseError("field \"p\" must be an integer");
    int p = j["p"].get<int>();
    Prime prime = [&] {
        try {
            return Prime(p);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what());
        }
    }();
    const json& rows = j["grid"];
    if (!rows.is_array() || rows.size() != static_cast<size_t>(p))
        throw ParseError("field \"grid\" must be an array of " + std::to_string(p) + " rows");
    RatGrid g(prime);
    for (int y = 0; y < p; ++y) {
        const json& row = rows[static_cast<size_t>(y)];
        if (!row.is_array() || row.size() != static_cast<size_t>(p))
            throw ParseError("row " + std::to_string(y + 1) + ": expected " + std::to_string(p) +
                             " values, got " +
                             std::to_string(row.is_array() ? row.size() : size_t{0}));
        for (int x = 0; x < p; ++x) {
            const json& cell = row[static_cast<size_t>(x)];
            if (cell.is_number_integer())
                g.at(x, y) = rat(cell.get<long long>());
            else if (cell.is_string())
                g.at(x, y) = parse_cell(cell.get<std::string>(), static_cast<size_t>(y),
                                        static_cast<size_t>(x));
            else
                throw ParseError("row " + std::to_string(y + 1) + ", column " +
                                 std::to_string(x + 1) + ": entries must be integers or strings");
        }
    }
    return g;
}

IntGrid parse_json_int_grid(const std::string& text) {
    return require_integer(parse_json_grid(text));
}

RatGrid parse_grid_auto(const std::string& text) {
    for (char c : text) {
        if (isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return parse_json_grid(text);
        break;
    }
    return parse_ascii_grid(text);
}

std::vector<std::vector<long long>> parse_int_rows(const std::string& text) {
    std::vector<std::vector<long long>> out;
    for (const auto& row : tokenize_rows(text)) {
        std::vector<long long> vals;
        vals.reserve(row.size());
        for (size_t c = 0; c < row.size(); ++c) {
            Rat v = parse_cell(row[c], out.size(), c);
            if (v.get_den() != 1) throw ParseError("expected integer rows");
            vals.push_back(v.get_num().get_si());
        }
        out.push_back(std::move(vals));
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace dirspec
