#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "gne/game.hpp"

namespace gne {

/// Malformed game or config document. line/column are 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : std::runtime_error(what), line_(line), column_(column) {}
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// File missing or unreadable.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the game document:
///   { "n": 2, "d": 2, "layout": "blocked"|"interleaved",
///     "players": [ { "Q": [[...]], "r": [...], "k": 0, "A": [[...]], "b": [...] }, ... ] }
/// Q_i within 1e-12 relative of symmetric is replaced by ½(Q_i + Q_iᵀ); larger asymmetry is
/// kept as-is so validate() reports it. Shape problems are left to validate() as well.
QuadraticGame parse_game(const std::string& text);
QuadraticGame load_game(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace gne
