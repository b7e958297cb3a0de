#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "skillcompat/chess/types.hpp"

namespace skillcompat::chess {

inline constexpr std::string_view kStartFen =
    "rnbqkbnr/pppppppp/8/8/8/8/PPPPPPPP/RNBQKBNR w KQkq - 0 1";

inline constexpr int kDefaultMaxPlies = 512;

enum class GameStatus : uint8_t {
  kOngoing,
  kCheckmate,
  kStalemate,
  kDrawFiftyMove,
  kDrawThreefold,
  kDrawInsufficient,
  kDrawMaxPly,
};

std::string_view to_string(GameStatus s);
constexpr bool is_terminal(GameStatus s) { return s != GameStatus::kOngoing; }

// Immutable chess position. Every mutation returns a new value.
class Position {
 public:
  // Parses a 6-field FEN; throws ParseError on malformed or invalid input.
  static Position from_fen(std::string_view fen);
  static Position start() { return from_fen(kStartFen); }

  std::string fen() const;

  Piece at(Square s) const { return board_[static_cast<size_t>(s)]; }
  Color side_to_move() const { return side_; }
  uint8_t castling() const { return castling_; }
  Square en_passant() const { return ep_; }
  int halfmove_clock() const { return halfmove_; }
  int fullmove_number() const { return fullmove_; }
  Square king_square(Color c) const { return kings_[static_cast<size_t>(index(c))]; }

  // Hash over placement, side, castling and (capturable) en-passant file.
  uint64_t key() const { return key_; }

  bool in_check() const;
  bool attacked(Square s, Color by) const;

  std::vector<Move> legal_moves() const;
  bool is_legal(const Move& m) const;

  // Throws IllegalMoveError if m is not legal here.
  Position apply(const Move& m) const;
  // Caller guarantees legality (used by search).
  Position apply_unchecked(const Move& m) const;

  // Type of the moving piece. Castling is a king move; promotions are pawn
  // moves. Throws IllegalMoveError if m is not legal.
  PieceType piece_type_of(const Move& m) const;

  Move parse_uci(std::string_view text) const;
  std::string san(const Move& m) const;

  bool insufficient_material() const;

  friend bool operator==(const Position& a, const Position& b) {
    return a.board_ == b.board_ && a.side_ == b.side_ && a.castling_ == b.castling_ &&
           a.ep_ == b.ep_ && a.halfmove_ == b.halfmove_ && a.fullmove_ == b.fullmove_;
  }

  // Pseudo-legal generation (own king may be left in check).
  void pseudo_moves(std::vector<Move>& out, bool captures_only = false) const;
  bool leaves_king_safe(const Move& m) const;

 private:
  Position() = default;
  void recompute_key();
  bool ep_capturable() const;

  std::array<Piece, 64> board_{};
  Color side_ = Color::kWhite;
  uint8_t castling_ = 0;
  Square ep_ = kNoSquare;
  int halfmove_ = 0;
  int fullmove_ = 1;
  std::array<Square, 2> kings_{kNoSquare, kNoSquare};
  uint64_t key_ = 0;
};

std::vector<Move> legal_moves(const Position& p);
Position apply_move(const Position& p, const Move& m);
PieceType piece_type_of(const Position& p, const Move& m);
Position parse_fen(std::string_view text);
std::string serialize_fen(const Position& p);

// Terminal detection. `history` holds every earlier position of the game
// (oldest first, excluding p); its size is the ply count of p.
GameStatus game_status(const Position& p, std::span<const Position> history,
                       int max_plies = kDefaultMaxPlies);

// Same, with the history given as position keys.
GameStatus game_status_by_keys(const Position& p, std::span<const uint64_t> history_keys,
                               int max_plies = kDefaultMaxPlies);

uint64_t perft(const Position& p, int depth);

}  // namespace skillcompat::chess
