// Minimal UCI engine around the builtin alpha-beta searcher.
//
// Options: MultiPV (default 1), CrashAfter (exit abruptly after N "go"
// commands; 0 disables), BadMove (1 = report an illegal bestmove).

#include <iostream>
#include <sstream>
#include <string>

#include "skillcompat/agents/search.hpp"
#include "skillcompat/util/error.hpp"

using skillcompat::agents::RootAnalysis;
using skillcompat::agents::Searcher;
using skillcompat::chess::Position;

namespace {

struct EngineState {
  Position position = Position::start();
  int multipv = 1;
  int crash_after = 0;
  bool bad_move = false;
  int go_count = 0;
  Searcher searcher;
};

void set_position(EngineState& s, std::istringstream& in) {
  std::string tok;
  in >> tok;
  if (tok == "startpos") {
    s.position = Position::start();
    in >> tok;
  } else if (tok == "fen") {
    std::string fen, part;
    while (in >> part && part != "moves") fen += (fen.empty() ? "" : " ") + part;
    s.position = Position::from_fen(fen);
    tok = part;
  }
  if (tok != "moves") return;
  std::string mv;
  while (in >> mv) s.position = s.position.apply(s.position.parse_uci(mv));
}

void set_option(EngineState& s, std::istringstream& in) {
  std::string tok, name, value;
  in >> tok;  // "name"
  while (in >> tok && tok != "value") name += (name.empty() ? "" : " ") + tok;
  std::getline(in >> std::ws, value);
  if (name == "MultiPV") s.multipv = std::max(1, std::stoi(value));
  else if (name == "CrashAfter") s.crash_after = std::stoi(value);
  else if (name == "BadMove") s.bad_move = value == "1" || value == "true";
}

void go(EngineState& s, std::istringstream& in) {
  if (s.crash_after > 0 && ++s.go_count > s.crash_after) std::exit(3);
  uint64_t nodes = 1500;
  std::string tok;
  while (in >> tok) {
    if (tok == "nodes") in >> nodes;
  }
  if (s.position.legal_moves().empty()) {
    std::cout << "bestmove (none)" << std::endl;
    return;
  }
  const RootAnalysis a = s.searcher.analyze(s.position, nodes);
  const int lines = std::min<int>(s.multipv, static_cast<int>(a.scores.size()));
  for (int i = lines - 1; i >= 0; --i) {
    const auto& r = a.scores[static_cast<size_t>(i)];
    std::cout << "info depth " << a.depth << " multipv " << (i + 1) << " score cp " << r.score << " nodes " << a.nodes
              << " pv " << r.move.uci() << "\n";
  }
  std::cout << "bestmove " << (s.bad_move ? std::string("a1a1") : a.scores.front().move.uci()) << std::endl;
}

}  // namespace

int main() {
  EngineState s;
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream in(line);
    std::string cmd;
    if (!(in >> cmd)) continue;
    try {
      if (cmd == "uci") {
        std::cout << "id name skillcompat-uci\nid author skillcompat\n"
                  << "option name MultiPV type spin default 1 min 1 max 256\n"
                  << "option name CrashAfter type spin default 0 min 0 max 1000000\n"
                  << "option name BadMove type check default false\nuciok" << std::endl;
      } else if (cmd == "isready") {
        std::cout << "readyok" << std::endl;
      } else if (cmd == "ucinewgame") {
        s.position = Position::start();
      } else if (cmd == "setoption") {
        set_option(s, in);
      } else if (cmd == "position") {
        set_position(s, in);
      } else if (cmd == "go") {
        go(s, in);
      } else if (cmd == "quit") {
        break;
      }
    } catch (const std::exception& e) {
      std::cout << "info string error " << e.what() << std::endl;
    }
  }
  return 0;
}
