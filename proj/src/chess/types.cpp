#include "skillcompat/chess/types.hpp"

#include <array>

namespace skillcompat::chess {

std::string_view to_string(PieceType t) {
  switch (t) {
    case PieceType::kPawn: return "pawn";
    case PieceType::kKnight: return "knight";
    case PieceType::kBishop: return "bishop";
    case PieceType::kRook: return "rook";
    case PieceType::kQueen: return "queen";
    case PieceType::kKing: return "king";
  }
  return "?";
}

std::optional<PieceType> piece_type_from_string(std::string_view s) {
  for (PieceType t : kAllPieceTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

char Piece::fen_char() const {
  if (empty()) return '.';
  constexpr std::string_view kLetters = "pnbrqk";
  char c = kLetters[static_cast<size_t>(type())];
  return color() == Color::kWhite ? static_cast<char>(c - 'a' + 'A') : c;
}

std::optional<Piece> Piece::from_fen_char(char ch) {
  Color color = (ch >= 'A' && ch <= 'Z') ? Color::kWhite : Color::kBlack;
  char lower = (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : ch;
  switch (lower) {
    case 'p': return Piece(color, PieceType::kPawn);
    case 'n': return Piece(color, PieceType::kKnight);
    case 'b': return Piece(color, PieceType::kBishop);
    case 'r': return Piece(color, PieceType::kRook);
    case 'q': return Piece(color, PieceType::kQueen);
    case 'k': return Piece(color, PieceType::kKing);
    default: return std::nullopt;
  }
}

std::string square_name(Square s) {
  if (s < 0 || s > 63) return "-";
  return {static_cast<char>('a' + file_of(s)), static_cast<char>('1' + rank_of(s))};
}

std::optional<Square> parse_square(std::string_view s) {
  if (s.size() != 2 || s[0] < 'a' || s[0] > 'h' || s[1] < '1' || s[1] > '8') return std::nullopt;
  return make_square(s[0] - 'a', s[1] - '1');
}

std::string Move::uci() const {
  std::string out = square_name(from) + square_name(to);
  if (promotion) {
    constexpr std::string_view kLetters = "pnbrqk";
    out.push_back(kLetters[static_cast<size_t>(*promotion)]);
  }
  return out;
}

bool uci_less(const Move& a, const Move& b) {
  auto key = [](const Move& m) {
    constexpr std::string_view kLetters = "pnbrqk";
    int promo = m.promotion ? kLetters[static_cast<size_t>(*m.promotion)] : 0;
    return std::array<int, 5>{file_of(m.from), rank_of(m.from), file_of(m.to), rank_of(m.to), promo};
  };
  return key(a) < key(b);
}

}  // namespace skillcompat::chess
