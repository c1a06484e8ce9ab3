#include "gne/game_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gne {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where + ": expected a number");
    return j.get<double>();
}

Vector vector_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw ParseError(where + "." + key + ": expected an array");
    Vector out;
    out.reserve(arr.size());
    for (std::size_t k = 0; k < arr.size(); ++k)
        out.push_back(number(arr[k], where + "." + key + "[" + std::to_string(k) + "]"));
    return out;
}

Matrix matrix_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing field '" + key + "'");
    const auto& arr = obj.at(key);
    if (!arr.is_array()) throw ParseError(where + "." + key + ": expected an array of rows");
    std::vector<std::vector<double>> rows;
    for (std::size_t r = 0; r < arr.size(); ++r) {
        const std::string rw = where + "." + key + "[" + std::to_string(r) + "]";
        if (!arr[r].is_array()) throw ParseError(rw + ": expected an array");
        std::vector<double> row;
        for (std::size_t c = 0; c < arr[r].size(); ++c)
            row.push_back(number(arr[r][c], rw + "[" + std::to_string(c) + "]"));
        rows.push_back(std::move(row));
    }
    try {
        return Matrix::from_rows(rows);
    } catch (const DimensionError&) {
        throw ParseError(where + "." + key + ": rows have different lengths");
    }
}

std::size_t count_field(const json& obj, const char* key) {
    if (!obj.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& v = obj.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ParseError(std::string(key) + ": expected an integer");
    const auto value = v.get<long long>();
    if (value < 0) throw ParseError(std::string(key) + ": must be non-negative");
    return static_cast<std::size_t>(value);
}

void symmetrize_within_tolerance(Matrix& q) {
    if (q.rows() != q.cols() || !q.all_finite()) return;
    const double scale = std::max(1.0, q.max_abs());
    for (std::size_t r = 0; r < q.rows(); ++r)
        for (std::size_t c = r + 1; c < q.cols(); ++c)
            if (std::abs(q(r, c) - q(c, r)) > 1e-12 * scale) return;
    for (std::size_t r = 0; r < q.rows(); ++r)
        for (std::size_t c = r + 1; c < q.cols(); ++c) q(r, c) = q(c, r) = 0.5 * (q(r, c) + q(c, r));
}

}  // namespace

QuadraticGame parse_game(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                             ": " + e.what(),
                         line, col);
    }
    if (!doc.is_object()) throw ParseError("game document must be a JSON object");

    const std::size_t n = count_field(doc, "n");
    const std::size_t d = count_field(doc, "d");
    ActionLayout layout = ActionLayout::blocked;
    if (doc.contains("layout")) {
        if (!doc["layout"].is_string()) throw ParseError("layout: expected a string");
        const auto parsed = parse_layout(doc["layout"].get<std::string>());
        if (!parsed) throw ParseError("layout: expected 'blocked' or 'interleaved'");
        layout = *parsed;
    }
    if (!doc.contains("players") || !doc["players"].is_array()) throw ParseError("players: expected an array");

    std::vector<PlayerData> players;
    for (std::size_t i = 0; i < doc["players"].size(); ++i) {
        const auto& pj = doc["players"][i];
        const std::string where = "players[" + std::to_string(i) + "]";
        if (!pj.is_object()) throw ParseError(where + ": expected an object");
        PlayerData p;
        p.q = matrix_field(pj, "Q", where);
        p.r = vector_field(pj, "r", where);
        p.k = pj.contains("k") ? number(pj["k"], where + ".k") : 0.0;
        p.a = pj.contains("A") ? matrix_field(pj, "A", where) : Matrix{};
        p.b = pj.contains("b") ? vector_field(pj, "b", where) : Vector{};
        symmetrize_within_tolerance(p.q);
        players.push_back(std::move(p));
    }
    return QuadraticGame(n, d, std::move(players), layout);
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

QuadraticGame load_game(const std::filesystem::path& path) { return parse_game(read_text_file(path)); }

}  // namespace gne
