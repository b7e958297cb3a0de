#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace skillcompat::chess {

enum class Color : uint8_t { kWhite = 0, kBlack = 1 };

constexpr Color opposite(Color c) { return c == Color::kWhite ? Color::kBlack : Color::kWhite; }
constexpr int index(Color c) { return static_cast<int>(c); }

// Order matters: it is the tie-break order used by the HB expector.
enum class PieceType : uint8_t { kPawn = 0, kKnight, kBishop, kRook, kQueen, kKing };

inline constexpr std::array<PieceType, 6> kAllPieceTypes = {
    PieceType::kPawn, PieceType::kKnight, PieceType::kBishop,
    PieceType::kRook, PieceType::kQueen,  PieceType::kKing};

std::string_view to_string(PieceType t);
std::optional<PieceType> piece_type_from_string(std::string_view s);

// A colored piece or empty. Encoded as 0 = empty, 1..6 white, 9..14 black.
class Piece {
 public:
  constexpr Piece() = default;
  constexpr Piece(Color c, PieceType t)
      : code_(static_cast<uint8_t>((static_cast<int>(t) + 1) | (c == Color::kBlack ? 8 : 0))) {}

  constexpr bool empty() const { return code_ == 0; }
  constexpr Color color() const { return (code_ & 8) ? Color::kBlack : Color::kWhite; }
  constexpr PieceType type() const { return static_cast<PieceType>((code_ & 7) - 1); }
  constexpr uint8_t code() const { return code_; }

  constexpr bool is(Color c, PieceType t) const { return code_ == Piece(c, t).code_; }

  char fen_char() const;
  static std::optional<Piece> from_fen_char(char ch);

  friend constexpr bool operator==(Piece, Piece) = default;

 private:
  uint8_t code_ = 0;
};

// Square index 0..63, a1 = 0, h1 = 7, a8 = 56.
using Square = int8_t;
inline constexpr Square kNoSquare = -1;

constexpr int file_of(Square s) { return s & 7; }
constexpr int rank_of(Square s) { return s >> 3; }
constexpr Square make_square(int file, int rank) { return static_cast<Square>(rank * 8 + file); }

std::string square_name(Square s);
std::optional<Square> parse_square(std::string_view s);

struct Move {
  Square from = 0;
  Square to = 0;
  std::optional<PieceType> promotion;

  // Long algebraic UCI form, e.g. "e2e4", "e7e8q".
  std::string uci() const;

  friend bool operator==(const Move&, const Move&) = default;
};

// Strict weak ordering by UCI string; the canonical tie-break for argmax.
bool uci_less(const Move& a, const Move& b);

// Castling rights bit flags.
enum CastlingRight : uint8_t {
  kWhiteKingside = 1,
  kWhiteQueenside = 2,
  kBlackKingside = 4,
  kBlackQueenside = 8,
};

}  // namespace skillcompat::chess
