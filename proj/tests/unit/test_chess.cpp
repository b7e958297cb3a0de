#include <doctest.h>

#include "oracles.hpp"
#include "skillcompat/chess/position.hpp"
#include "skillcompat/experiment/commands.hpp"
#include "skillcompat/util/error.hpp"

using namespace skillcompat;
using chess::GameStatus;
using chess::PieceType;
using chess::Position;

namespace {

Position play(Position p, std::initializer_list<const char*> moves) {
  for (const char* m : moves) p = p.apply(p.parse_uci(m));
  return p;
}

constexpr const char* kKiwipete = "r3k2r/p1ppqpb1/bn2pnp1/3PN3/1p2P3/2N2Q1p/PPPBBPPP/R3K2R w KQkq - 0 1";

}  // namespace

TEST_SUITE("chess") {
  TEST_CASE("fen parsing and round trip") {
    Position p = Position::from_fen(chess::kStartFen);
    CHECK(p.side_to_move() == chess::Color::kWhite);
    CHECK(p.fen() == chess::kStartFen);
    CHECK_THROWS_AS(Position::from_fen("8/8/8/8/8/8/8/8 w - - 0 1"), ParseError);
    CHECK_THROWS_AS(Position::from_fen("not a fen"), ParseError);
    for (const char* fen : {kKiwipete, "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
                            "rnbqkbnr/pp1ppppp/8/2pP4/8/8/PPP1PPPP/RNBQKBNR w KQkq c6 0 3"}) {
      CHECK(Position::from_fen(fen).fen() == fen);
    }
  }

  TEST_CASE("move generation and special moves") {
    CHECK(Position::start().legal_moves().size() == 20);
    Position fools = play(Position::start(), {"f2f3", "e7e5", "g2g4", "d8h4"});
    CHECK(fools.legal_moves().empty());
    CHECK(chess::game_status(fools, {}) == GameStatus::kCheckmate);

    Position e4 = play(Position::start(), {"e2e4"});
    CHECK(chess::square_name(e4.en_passant()) == "e3");

    Position cap = play(Position::start(), {"e2e4", "d7d5", "g1f3", "b8c6", "e4d5"});
    CHECK(cap.halfmove_clock() == 0);

    Position castle = Position::from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
    Position after = castle.apply(castle.parse_uci("e1g1"));
    CHECK(after.at(*chess::parse_square("g1")).type() == PieceType::kKing);
    CHECK(after.at(*chess::parse_square("f1")).type() == PieceType::kRook);
    CHECK(after.at(*chess::parse_square("h1")).empty());
  }

  TEST_CASE("moving piece type") {
    Position s = Position::start();
    CHECK(s.piece_type_of(s.parse_uci("e2e4")) == PieceType::kPawn);
    Position castle = Position::from_fen("r3k2r/8/8/8/8/8/8/R3K2R w KQkq - 0 1");
    CHECK(castle.piece_type_of(castle.parse_uci("e1g1")) == PieceType::kKing);
    Position promo = Position::from_fen("8/4P3/8/8/8/8/k7/7K w - - 0 1");
    CHECK(promo.piece_type_of(promo.parse_uci("e7e8q")) == PieceType::kPawn);
    CHECK_THROWS_AS(s.piece_type_of(s.parse_uci("e2e5")), IllegalMoveError);
  }

  TEST_CASE("game status: repetition, fifty moves, ply cap") {
    std::vector<Position> history;
    Position p = Position::start();
    for (const char* m : {"g1f3", "g8f6", "f3g1", "f6g8", "g1f3", "g8f6", "f3g1", "f6g8"}) {
      history.push_back(p);
      p = p.apply(p.parse_uci(m));
    }
    CHECK(chess::game_status(p, history) == GameStatus::kDrawThreefold);

    Position fifty = Position::from_fen("8/8/8/4k3/8/8/4K3/4R3 w - - 100 80");
    CHECK(chess::game_status(fifty, {}) == GameStatus::kDrawFiftyMove);

    std::vector<uint64_t> keys(chess::kDefaultMaxPlies, 0);
    CHECK(chess::kDefaultMaxPlies == 512);
    CHECK(chess::game_status_by_keys(Position::start(), keys) == GameStatus::kDrawMaxPly);
  }

  TEST_CASE("perft matches the reference generator") {
    const uint64_t start[] = {1, 20, 400, 8902};
    for (int d = 0; d <= 3; ++d) {
      CHECK(chess::perft(Position::start(), d) == start[d]);
      CHECK(testing::reference_perft(std::string(chess::kStartFen), d) == start[d]);
    }
    for (const char* fen : {kKiwipete, "8/2p5/3p4/KP5r/1R3p1k/8/4P1P1/8 w - - 0 1",
                            "r3k2r/Pppp1ppp/1b3nbN/nP6/BBP1P3/q4N2/Pp1P2PP/R2Q1RK1 w kq - 0 1"}) {
      for (int d = 1; d <= 3; ++d) {
        CHECK_MESSAGE(chess::perft(Position::from_fen(fen), d) == testing::reference_perft(fen, d), fen, " d", d);
      }
    }
    CHECK(chess::perft(Position::from_fen(kKiwipete), 3) == 97862);
  }

  TEST_CASE("perft command") {
    CHECK(experiment::cmd_perft(std::string(chess::kStartFen), 1) == 20);
    CHECK(experiment::cmd_perft(std::string(chess::kStartFen), 3) == 8902);
    CHECK_THROWS_AS(experiment::cmd_perft("8/8/8/8/8/8/8/8 w - - 0 1", 1), ParseError);
  }

  TEST_CASE("san") {
    Position s = Position::start();
    CHECK(s.san(s.parse_uci("g1f3")) == "Nf3");
    Position fools = play(Position::start(), {"f2f3", "e7e5", "g2g4"});
    CHECK(fools.san(fools.parse_uci("d8h4")) == "Qh4#");
  }
}
