#include "skillcompat/chess/position.hpp"

#include <algorithm>
#include <sstream>

#include "skillcompat/util/error.hpp"
#include "skillcompat/util/random.hpp"

namespace skillcompat::chess {
namespace {

struct Tables {
  std::array<std::vector<Square>, 64> knight;
  std::array<std::vector<Square>, 64> king;
  // rays[dir][sq]: squares along direction, nearest first. dirs 0-3 rook, 4-7 bishop.
  std::array<std::array<std::vector<Square>, 64>, 8> rays;
  std::array<std::array<uint64_t, 64>, 16> piece_keys{};
  uint64_t side_key = 0;
  std::array<uint64_t, 16> castling_keys{};
  std::array<uint64_t, 8> ep_keys{};

  Tables() {
    constexpr int kKnightD[8][2] = {{1, 2}, {2, 1}, {2, -1}, {1, -2}, {-1, -2}, {-2, -1}, {-2, 1}, {-1, 2}};
    constexpr int kKingD[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    constexpr int kRayD[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    for (int sq = 0; sq < 64; ++sq) {
      int f = sq & 7, r = sq >> 3;
      for (auto [df, dr] : kKnightD) {
        if (f + df >= 0 && f + df < 8 && r + dr >= 0 && r + dr < 8) knight[sq].push_back(make_square(f + df, r + dr));
      }
      for (auto [df, dr] : kKingD) {
        if (f + df >= 0 && f + df < 8 && r + dr >= 0 && r + dr < 8) king[sq].push_back(make_square(f + df, r + dr));
      }
      for (int d = 0; d < 8; ++d) {
        int nf = f + kRayD[d][0], nr = r + kRayD[d][1];
        while (nf >= 0 && nf < 8 && nr >= 0 && nr < 8) {
          rays[d][sq].push_back(make_square(nf, nr));
          nf += kRayD[d][0];
          nr += kRayD[d][1];
        }
      }
    }
    uint64_t state = 0x5EED5EED2024ULL;
    auto next = [&state] { return state = mix_seed(state); };
    for (auto& row : piece_keys) {
      for (auto& k : row) k = next();
    }
    side_key = next();
    for (auto& k : castling_keys) k = next();
    for (auto& k : ep_keys) k = next();
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

constexpr std::array<PieceType, 4> kPromotions = {PieceType::kQueen, PieceType::kRook, PieceType::kBishop,
                                                  PieceType::kKnight};

// Castling rights that survive a move touching `sq`.
uint8_t castling_mask(Square sq) {
  switch (sq) {
    case 0: return static_cast<uint8_t>(~kWhiteQueenside);
    case 7: return static_cast<uint8_t>(~kWhiteKingside);
    case 4: return static_cast<uint8_t>(~(kWhiteKingside | kWhiteQueenside));
    case 56: return static_cast<uint8_t>(~kBlackQueenside);
    case 63: return static_cast<uint8_t>(~kBlackKingside);
    case 60: return static_cast<uint8_t>(~(kBlackKingside | kBlackQueenside));
    default: return 0xFF;
  }
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    size_t j = i;
    while (j < s.size() && !(s[j] == ' ' || s[j] == '\t' || s[j] == '\n' || s[j] == '\r')) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_counter(std::string_view s, const char* what) {
  if (s.empty() || s.size() > 6) throw ParseError(std::string("FEN: bad ") + what);
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') throw ParseError(std::string("FEN: bad ") + what);
    v = v * 10 + (c - '0');
  }
  return v;
}

}  // namespace

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::kOngoing: return "ongoing";
    case GameStatus::kCheckmate: return "checkmate";
    case GameStatus::kStalemate: return "stalemate";
    case GameStatus::kDrawFiftyMove: return "draw-fifty-move";
    case GameStatus::kDrawThreefold: return "draw-threefold";
    case GameStatus::kDrawInsufficient: return "draw-insufficient";
    case GameStatus::kDrawMaxPly: return "draw-maxply";
  }
  return "?";
}

Position Position::from_fen(std::string_view fen) {
  auto fields = split_ws(fen);
  if (fields.size() != 6) {
    throw ParseError("FEN: expected 6 fields, got " + std::to_string(fields.size()));
  }
  Position p;
  int rank = 7, file = 0;
  for (char c : fields[0]) {
    if (c == '/') {
      if (file != 8) throw ParseError("FEN: rank " + std::to_string(rank + 1) + " has wrong length");
      --rank;
      file = 0;
      if (rank < 0) throw ParseError("FEN: too many ranks");
    } else if (c >= '1' && c <= '8') {
      file += c - '0';
      if (file > 8) throw ParseError("FEN: rank overflow");
    } else {
      auto piece = Piece::from_fen_char(c);
      if (!piece) throw ParseError(std::string("FEN: illegal piece character '") + c + "'");
      if (file >= 8) throw ParseError("FEN: rank overflow");
      Square sq = make_square(file, rank);
      p.board_[static_cast<size_t>(sq)] = *piece;
      if (piece->type() == PieceType::kPawn && (rank == 0 || rank == 7)) {
        throw ParseError("FEN: pawn on back rank");
      }
      if (piece->type() == PieceType::kKing) {
        auto& k = p.kings_[static_cast<size_t>(index(piece->color()))];
        if (k != kNoSquare) throw ParseError("FEN: more than one king per side");
        k = sq;
      }
      ++file;
    }
  }
  if (rank != 0 || file != 8) throw ParseError("FEN: placement does not cover 8 ranks");
  if (p.kings_[0] == kNoSquare || p.kings_[1] == kNoSquare) throw ParseError("FEN: missing king");

  if (fields[1] == "w") {
    p.side_ = Color::kWhite;
  } else if (fields[1] == "b") {
    p.side_ = Color::kBlack;
  } else {
    throw ParseError("FEN: bad side to move");
  }

  if (fields[2] != "-") {
    for (char c : fields[2]) {
      switch (c) {
        case 'K': p.castling_ |= kWhiteKingside; break;
        case 'Q': p.castling_ |= kWhiteQueenside; break;
        case 'k': p.castling_ |= kBlackKingside; break;
        case 'q': p.castling_ |= kBlackQueenside; break;
        default: throw ParseError("FEN: bad castling field");
      }
    }
  }
  // Drop rights the placement cannot support.
  if (!p.at(4).is(Color::kWhite, PieceType::kKing)) p.castling_ &= ~(kWhiteKingside | kWhiteQueenside);
  if (!p.at(7).is(Color::kWhite, PieceType::kRook)) p.castling_ &= ~kWhiteKingside;
  if (!p.at(0).is(Color::kWhite, PieceType::kRook)) p.castling_ &= ~kWhiteQueenside;
  if (!p.at(60).is(Color::kBlack, PieceType::kKing)) p.castling_ &= ~(kBlackKingside | kBlackQueenside);
  if (!p.at(63).is(Color::kBlack, PieceType::kRook)) p.castling_ &= ~kBlackKingside;
  if (!p.at(56).is(Color::kBlack, PieceType::kRook)) p.castling_ &= ~kBlackQueenside;

  if (fields[3] != "-") {
    auto sq = parse_square(fields[3]);
    if (!sq) throw ParseError("FEN: bad en-passant square");
    int expected_rank = p.side_ == Color::kWhite ? 5 : 2;
    if (rank_of(*sq) != expected_rank) throw ParseError("FEN: en-passant square must be on rank 3 or 6");
    p.ep_ = *sq;
  }
  p.halfmove_ = parse_counter(fields[4], "halfmove clock");
  p.fullmove_ = parse_counter(fields[5], "fullmove number");
  if (p.fullmove_ < 1) throw ParseError("FEN: fullmove number must be >= 1");

  if (p.attacked(p.king_square(opposite(p.side_)), p.side_)) {
    throw ParseError("FEN: side not to move is in check");
  }
  p.recompute_key();
  return p;
}

std::string Position::fen() const {
  std::ostringstream out;
  for (int rank = 7; rank >= 0; --rank) {
    int empty = 0;
    for (int file = 0; file < 8; ++file) {
      Piece pc = at(make_square(file, rank));
      if (pc.empty()) {
        ++empty;
        continue;
      }
      if (empty) out << empty;
      empty = 0;
      out << pc.fen_char();
    }
    if (empty) out << empty;
    if (rank) out << '/';
  }
  out << (side_ == Color::kWhite ? " w " : " b ");
  if (castling_ == 0) {
    out << '-';
  } else {
    if (castling_ & kWhiteKingside) out << 'K';
    if (castling_ & kWhiteQueenside) out << 'Q';
    if (castling_ & kBlackKingside) out << 'k';
    if (castling_ & kBlackQueenside) out << 'q';
  }
  out << ' ' << square_name(ep_) << ' ' << halfmove_ << ' ' << fullmove_;
  return out.str();
}

bool Position::attacked(Square s, Color by) const {
  const Tables& t = tables();
  // Pawns attack diagonally forward from their own perspective.
  int f = file_of(s), r = rank_of(s);
  int pawn_rank = by == Color::kWhite ? r - 1 : r + 1;
  if (pawn_rank >= 0 && pawn_rank < 8) {
    for (int df : {-1, 1}) {
      int pf = f + df;
      if (pf >= 0 && pf < 8 && at(make_square(pf, pawn_rank)).is(by, PieceType::kPawn)) return true;
    }
  }
  for (Square n : t.knight[static_cast<size_t>(s)]) {
    if (at(n).is(by, PieceType::kKnight)) return true;
  }
  for (Square n : t.king[static_cast<size_t>(s)]) {
    if (at(n).is(by, PieceType::kKing)) return true;
  }
  for (int d = 0; d < 8; ++d) {
    PieceType slider = d < 4 ? PieceType::kRook : PieceType::kBishop;
    for (Square n : t.rays[static_cast<size_t>(d)][static_cast<size_t>(s)]) {
      Piece pc = at(n);
      if (pc.empty()) continue;
      if (pc.color() == by && (pc.type() == slider || pc.type() == PieceType::kQueen)) return true;
      break;
    }
  }
  return false;
}

bool Position::in_check() const { return attacked(king_square(side_), opposite(side_)); }

void Position::pseudo_moves(std::vector<Move>& out, bool captures_only) const {
  const Tables& t = tables();
  const Color us = side_, them = opposite(side_);
  const int forward = us == Color::kWhite ? 8 : -8;
  const int start_rank = us == Color::kWhite ? 1 : 6;
  const int last_rank = us == Color::kWhite ? 7 : 0;

  auto add_pawn = [&](Square from, Square to) {
    if (rank_of(to) == last_rank) {
      for (PieceType promo : kPromotions) out.push_back(Move{from, to, promo});
    } else {
      out.push_back(Move{from, to, std::nullopt});
    }
  };

  for (Square sq = 0; sq < 64; ++sq) {
    Piece pc = at(sq);
    if (pc.empty() || pc.color() != us) continue;
    switch (pc.type()) {
      case PieceType::kPawn: {
        Square one = static_cast<Square>(sq + forward);
        if (at(one).empty() && (!captures_only || rank_of(one) == last_rank)) {
          add_pawn(sq, one);
          if (!captures_only && rank_of(sq) == start_rank) {
            Square two = static_cast<Square>(one + forward);
            if (at(two).empty()) out.push_back(Move{sq, two, std::nullopt});
          }
        }
        for (int df : {-1, 1}) {
          int f = file_of(sq) + df;
          if (f < 0 || f > 7) continue;
          Square to = make_square(f, rank_of(one));
          Piece target = at(to);
          if ((!target.empty() && target.color() == them) || to == ep_) add_pawn(sq, to);
        }
        break;
      }
      case PieceType::kKnight:
      case PieceType::kKing: {
        const auto& targets = pc.type() == PieceType::kKnight ? t.knight[static_cast<size_t>(sq)]
                                                              : t.king[static_cast<size_t>(sq)];
        for (Square to : targets) {
          Piece target = at(to);
          if (target.empty() ? !captures_only : target.color() == them) out.push_back(Move{sq, to, std::nullopt});
        }
        break;
      }
      default: {
        int first = pc.type() == PieceType::kBishop ? 4 : 0;
        int last = pc.type() == PieceType::kRook ? 4 : 8;
        for (int d = first; d < last; ++d) {
          for (Square to : t.rays[static_cast<size_t>(d)][static_cast<size_t>(sq)]) {
            Piece target = at(to);
            if (target.empty()) {
              if (!captures_only) out.push_back(Move{sq, to, std::nullopt});
              continue;
            }
            if (target.color() == them) out.push_back(Move{sq, to, std::nullopt});
            break;
          }
        }
      }
    }
  }

  if (captures_only) return;
  // Castling: path empty, king not in check, transit square not attacked.
  // The destination square is checked by the legality filter.
  const Square king = king_square(us);
  const uint8_t ks = us == Color::kWhite ? kWhiteKingside : kBlackKingside;
  const uint8_t qs = us == Color::kWhite ? kWhiteQueenside : kBlackQueenside;
  if ((castling_ & (ks | qs)) && !attacked(king, them)) {
    if ((castling_ & ks) && at(static_cast<Square>(king + 1)).empty() && at(static_cast<Square>(king + 2)).empty() &&
        !attacked(static_cast<Square>(king + 1), them)) {
      out.push_back(Move{king, static_cast<Square>(king + 2), std::nullopt});
    }
    if ((castling_ & qs) && at(static_cast<Square>(king - 1)).empty() && at(static_cast<Square>(king - 2)).empty() &&
        at(static_cast<Square>(king - 3)).empty() && !attacked(static_cast<Square>(king - 1), them)) {
      out.push_back(Move{king, static_cast<Square>(king - 2), std::nullopt});
    }
  }
}

bool Position::leaves_king_safe(const Move& m) const {
  Position next = apply_unchecked(m);
  return !next.attacked(next.king_square(side_), next.side_);
}

std::vector<Move> Position::legal_moves() const {
  std::vector<Move> pseudo;
  pseudo.reserve(64);
  pseudo_moves(pseudo);
  std::vector<Move> out;
  out.reserve(pseudo.size());
  for (const Move& m : pseudo) {
    if (leaves_king_safe(m)) out.push_back(m);
  }
  return out;
}

bool Position::is_legal(const Move& m) const {
  auto moves = legal_moves();
  return std::find(moves.begin(), moves.end(), m) != moves.end();
}

Position Position::apply(const Move& m) const {
  if (!is_legal(m)) throw IllegalMoveError("illegal move " + m.uci() + " in " + fen());
  return apply_unchecked(m);
}

Position Position::apply_unchecked(const Move& m) const {
  const Tables& t = tables();
  Position next = *this;
  const Piece mover = at(m.from);
  const Piece captured = at(m.to);
  const Color us = side_;
  const bool is_pawn = mover.type() == PieceType::kPawn;

  auto put = [&](Square s, Piece pc) {
    Piece old = next.board_[static_cast<size_t>(s)];
    if (!old.empty()) next.key_ ^= t.piece_keys[old.code()][static_cast<size_t>(s)];
    next.board_[static_cast<size_t>(s)] = pc;
    if (!pc.empty()) next.key_ ^= t.piece_keys[pc.code()][static_cast<size_t>(s)];
  };

  // Remove the en-passant and castling components; re-added below.
  if (ep_capturable()) next.key_ ^= t.ep_keys[static_cast<size_t>(file_of(ep_))];
  next.key_ ^= t.castling_keys[castling_];

  bool capture = !captured.empty();
  if (is_pawn && m.to == ep_) {
    Square victim = static_cast<Square>(m.to + (us == Color::kWhite ? -8 : 8));
    put(victim, Piece{});
    capture = true;
  }
  put(m.from, Piece{});
  put(m.to, m.promotion ? Piece(us, *m.promotion) : mover);

  if (mover.type() == PieceType::kKing) {
    next.kings_[static_cast<size_t>(index(us))] = m.to;
    if (m.to - m.from == 2) {
      put(static_cast<Square>(m.from + 3), Piece{});
      put(static_cast<Square>(m.from + 1), Piece(us, PieceType::kRook));
    } else if (m.from - m.to == 2) {
      put(static_cast<Square>(m.from - 4), Piece{});
      put(static_cast<Square>(m.from - 1), Piece(us, PieceType::kRook));
    }
  }

  next.castling_ = static_cast<uint8_t>(castling_ & castling_mask(m.from) & castling_mask(m.to));
  next.key_ ^= t.castling_keys[next.castling_];

  next.ep_ = kNoSquare;
  if (is_pawn && std::abs(m.to - m.from) == 16) next.ep_ = static_cast<Square>((m.to + m.from) / 2);

  next.halfmove_ = (is_pawn || capture) ? 0 : halfmove_ + 1;
  if (us == Color::kBlack) ++next.fullmove_;
  next.side_ = opposite(us);
  next.key_ ^= t.side_key;
  if (next.ep_capturable()) next.key_ ^= t.ep_keys[static_cast<size_t>(file_of(next.ep_))];
  return next;
}

bool Position::ep_capturable() const {
  if (ep_ == kNoSquare) return false;
  int pawn_rank = side_ == Color::kWhite ? 4 : 3;
  for (int df : {-1, 1}) {
    int f = file_of(ep_) + df;
    if (f >= 0 && f < 8 && at(make_square(f, pawn_rank)).is(side_, PieceType::kPawn)) return true;
  }
  return false;
}

void Position::recompute_key() {
  const Tables& t = tables();
  key_ = 0;
  for (Square s = 0; s < 64; ++s) {
    Piece pc = at(s);
    if (!pc.empty()) key_ ^= t.piece_keys[pc.code()][static_cast<size_t>(s)];
  }
  if (side_ == Color::kBlack) key_ ^= t.side_key;
  key_ ^= t.castling_keys[castling_];
  if (ep_capturable()) key_ ^= t.ep_keys[static_cast<size_t>(file_of(ep_))];
}

PieceType Position::piece_type_of(const Move& m) const {
  if (!is_legal(m)) throw IllegalMoveError("illegal move " + m.uci() + " in " + fen());
  return at(m.from).type();
}

Move Position::parse_uci(std::string_view text) const {
  if (text.size() != 4 && text.size() != 5) throw ParseError("bad UCI move '" + std::string(text) + "'");
  auto from = parse_square(text.substr(0, 2));
  auto to = parse_square(text.substr(2, 2));
  if (!from || !to) throw ParseError("bad UCI move '" + std::string(text) + "'");
  Move m{*from, *to, std::nullopt};
  if (text.size() == 5) {
    switch (text[4]) {
      case 'q': m.promotion = PieceType::kQueen; break;
      case 'r': m.promotion = PieceType::kRook; break;
      case 'b': m.promotion = PieceType::kBishop; break;
      case 'n': m.promotion = PieceType::kKnight; break;
      default: throw ParseError("bad promotion in '" + std::string(text) + "'");
    }
  }
  if (!is_legal(m)) throw IllegalMoveError("illegal move " + std::string(text) + " in " + fen());
  return m;
}

std::string Position::san(const Move& m) const {
  const Piece pc = at(m.from);
  std::string out;
  const bool capture = !at(m.to).empty() || (pc.type() == PieceType::kPawn && m.to == ep_);
  if (pc.type() == PieceType::kKing && std::abs(m.to - m.from) == 2) {
    out = m.to > m.from ? "O-O" : "O-O-O";
  } else if (pc.type() == PieceType::kPawn) {
    if (capture) {
      out.push_back(static_cast<char>('a' + file_of(m.from)));
      out.push_back('x');
    }
    out += square_name(m.to);
    if (m.promotion) {
      out.push_back('=');
      out.push_back(Piece(Color::kWhite, *m.promotion).fen_char());
    }
  } else {
    out.push_back(Piece(Color::kWhite, pc.type()).fen_char());
    bool ambiguous = false, same_file = false, same_rank = false;
    for (const Move& other : legal_moves()) {
      if (other.to != m.to || other.from == m.from || at(other.from) != pc) continue;
      ambiguous = true;
      same_file |= file_of(other.from) == file_of(m.from);
      same_rank |= rank_of(other.from) == rank_of(m.from);
    }
    if (ambiguous) {
      if (!same_file) {
        out.push_back(static_cast<char>('a' + file_of(m.from)));
      } else if (!same_rank) {
        out.push_back(static_cast<char>('1' + rank_of(m.from)));
      } else {
        out += square_name(m.from);
      }
    }
    if (capture) out.push_back('x');
    out += square_name(m.to);
  }
  Position next = apply_unchecked(m);
  if (next.in_check()) out.push_back(next.legal_moves().empty() ? '#' : '+');
  return out;
}

bool Position::insufficient_material() const {
  int minors = 0;
  for (Square s = 0; s < 64; ++s) {
    Piece pc = at(s);
    if (pc.empty() || pc.type() == PieceType::kKing) continue;
    if (pc.type() == PieceType::kKnight || pc.type() == PieceType::kBishop) {
      ++minors;
    } else {
      return false;
    }
  }
  // K v K, K+B v K, K+N v K.
  return minors <= 1;
}

std::vector<Move> legal_moves(const Position& p) { return p.legal_moves(); }
Position apply_move(const Position& p, const Move& m) { return p.apply(m); }
PieceType piece_type_of(const Position& p, const Move& m) { return p.piece_type_of(m); }
Position parse_fen(std::string_view text) { return Position::from_fen(text); }
std::string serialize_fen(const Position& p) { return p.fen(); }

GameStatus game_status_by_keys(const Position& p, std::span<const uint64_t> history_keys, int max_plies) {
  if (p.legal_moves().empty()) return p.in_check() ? GameStatus::kCheckmate : GameStatus::kStalemate;
  if (p.insufficient_material()) return GameStatus::kDrawInsufficient;
  if (p.halfmove_clock() >= 100) return GameStatus::kDrawFiftyMove;
  // Repetitions can only occur within the current halfmove window.
  int occurrences = 1;
  const size_t window = std::min<size_t>(history_keys.size(), static_cast<size_t>(p.halfmove_clock()));
  for (size_t i = history_keys.size() - window; i < history_keys.size(); ++i) {
    if (history_keys[i] == p.key() && ++occurrences >= 3) return GameStatus::kDrawThreefold;
  }
  if (static_cast<int>(history_keys.size()) >= max_plies) return GameStatus::kDrawMaxPly;
  return GameStatus::kOngoing;
}

GameStatus game_status(const Position& p, std::span<const Position> history, int max_plies) {
  std::vector<uint64_t> keys;
  keys.reserve(history.size());
  for (const Position& h : history) keys.push_back(h.key());
  return game_status_by_keys(p, keys, max_plies);
}

uint64_t perft(const Position& p, int depth) {
  if (depth <= 0) return 1;
  std::vector<Move> pseudo;
  pseudo.reserve(64);
  p.pseudo_moves(pseudo);
  uint64_t nodes = 0;
  for (const Move& m : pseudo) {
    Position next = p.apply_unchecked(m);
    if (next.attacked(next.king_square(p.side_to_move()), next.side_to_move())) continue;
    nodes += depth == 1 ? 1 : perft(next, depth - 1);
  }
  return nodes;
}

}  // namespace skillcompat::chess
