#include "skillcompat/agents/uci.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <sstream>

#include "skillcompat/agents/search.hpp"
#include "skillcompat/util/error.hpp"

namespace skillcompat::agents {

namespace {

void ignore_sigpipe() {
  static const bool once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)once;
}

// Engine-reported moves that fail to parse are protocol violations.
Move parse_engine_move(const Position& p, const std::string& text) {
  try {
    return p.parse_uci(text);
  } catch (const Error& e) {
    throw AgentError(std::string("UCI protocol violation: ") + e.what());
  }
}

}  // namespace

EngineProcess::EngineProcess(const std::string& path) {
  ignore_sigpipe();
  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
    throw AgentError("pipe() failed: " + std::string(std::strerror(errno)));
  }
  ::fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

  pid_ = ::fork();
  if (pid_ < 0) throw AgentError("fork() failed: " + std::string(std::strerror(errno)));
  if (pid_ == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[0]);
    char* argv[] = {const_cast<char*>(path.c_str()), nullptr};
    ::execv(path.c_str(), argv);
    int code = errno;
    (void)!::write(err_pipe[1], &code, sizeof(code));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];

  // The exec-status pipe closes on a successful exec; otherwise it carries errno.
  int code = 0;
  ssize_t n = ::read(err_pipe[0], &code, sizeof(code));
  ::close(err_pipe[0]);
  if (n == static_cast<ssize_t>(sizeof(code))) {
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
    ::close(to_child_);
    ::close(from_child_);
    to_child_ = from_child_ = -1;
    throw AgentError("cannot spawn engine '" + path + "': " + std::strerror(code));
  }
}

EngineProcess::~EngineProcess() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  if (pid_ > 0) {
    // Give the engine a moment to exit after "quit"/EOF, then force it.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, nullptr, WNOHANG) == pid_) return;
      ::usleep(2000);
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
}

bool EngineProcess::alive() {
  if (pid_ <= 0) return false;
  int status = 0;
  if (::waitpid(pid_, &status, WNOHANG) == pid_) {
    pid_ = -1;
    return false;
  }
  return true;
}

void EngineProcess::write_line(const std::string& line) {
  std::string data = line + "\n";
  size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AgentError("engine write failed: " + std::string(std::strerror(errno)));
    }
    off += static_cast<size_t>(n);
  }
}

std::optional<std::string> EngineProcess::read_line(int timeout_ms) {
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  while (true) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return std::nullopt;
    pollfd fd{from_child_, POLLIN, 0};
    int r = ::poll(&fd, 1, static_cast<int>(left.count()));
    if (r < 0) {
      if (errno == EINTR) continue;
      throw AgentError("engine poll failed: " + std::string(std::strerror(errno)));
    }
    if (r == 0) return std::nullopt;
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw AgentError("engine read failed: " + std::string(std::strerror(errno)));
    }
    if (n == 0) throw AgentError("engine closed its output (crashed or exited)");
    buffer_.append(chunk, static_cast<size_t>(n));
  }
}

std::optional<UciLine> parse_info_line(const std::string& line) {
  std::istringstream in(line);
  std::string tok;
  if (!(in >> tok) || tok != "info") return std::nullopt;
  UciLine out;
  bool has_score = false, has_pv = false;
  while (in >> tok) {
    if (tok == "multipv") {
      in >> out.multipv;
    } else if (tok == "depth") {
      in >> out.depth;
    } else if (tok == "score") {
      std::string kind;
      long value = 0;
      in >> kind >> value;
      if (kind == "cp") {
        out.score = {static_cast<double>(value), false};
      } else if (kind == "mate") {
        // Mate in n moves for the side to move (negative: being mated).
        long plies = value > 0 ? 2 * value - 1 : -2 * value;
        double s = kMateScore - static_cast<double>(plies);
        out.score = {value > 0 ? s : -s, true};
      } else {
        return std::nullopt;
      }
      has_score = true;
    } else if (tok == "pv") {
      if (in >> out.first_move) has_pv = true;
      break;
    } else if (tok == "string") {
      return std::nullopt;
    }
  }
  if (!has_score || !has_pv) return std::nullopt;
  return out;
}

UciEngine::UciEngine(const std::string& path, const std::vector<std::pair<std::string, std::string>>& options,
                     int timeout_ms)
    : process_(path), timeout_ms_(timeout_ms) {
  send("uci");
  while (true) {
    auto line = process_.read_line(timeout_ms_);
    if (!line) throw AgentError("UCI handshake timed out waiting for uciok from " + path);
    transcript_.push_back("< " + *line);
    if (line->rfind("id name ", 0) == 0) engine_name_ = line->substr(8);
    if (*line == "uciok") break;
  }
  for (const auto& [name, value] : options) send("setoption name " + name + " value " + value);
  send("isready");
  expect("readyok");
}

UciEngine::~UciEngine() {
  try {
    send("quit");
  } catch (const std::exception&) {
    // Engine already gone.
  }
}

void UciEngine::send(const std::string& line) {
  transcript_.push_back("> " + line);
  process_.write_line(line);
}

std::string UciEngine::expect(const std::string& token) {
  while (true) {
    auto line = process_.read_line(timeout_ms_);
    if (!line) throw AgentError("UCI timeout waiting for '" + token + "'");
    transcript_.push_back("< " + *line);
    if (line->rfind(token, 0) == 0) return *line;
  }
}

void UciEngine::new_game() {
  send("ucinewgame");
  send("isready");
  expect("readyok");
}

UciSearchResult UciEngine::go_nodes(const Position& p, uint64_t nodes, int multipv) {
  multipv = std::max(multipv, 1);
  if (multipv != current_multipv_) {
    send("setoption name MultiPV value " + std::to_string(multipv));
    current_multipv_ = multipv;
  }
  send("position fen " + p.fen());
  send("go nodes " + std::to_string(nodes));
  UciSearchResult result;
  std::vector<std::optional<UciLine>> latest(static_cast<size_t>(multipv));
  while (true) {
    auto line = process_.read_line(timeout_ms_);
    if (!line) throw AgentError("UCI timeout waiting for bestmove");
    transcript_.push_back("< " + *line);
    if (line->rfind("bestmove", 0) == 0) {
      std::istringstream in(*line);
      std::string tok;
      in >> tok >> result.bestmove;
      break;
    }
    if (auto info = parse_info_line(*line)) {
      if (info->multipv >= 1 && info->multipv <= multipv) latest[static_cast<size_t>(info->multipv - 1)] = *info;
    }
  }
  if (result.bestmove.empty() || result.bestmove == "(none)") throw AgentError("engine returned no bestmove");
  for (auto& l : latest) {
    if (l) result.lines.push_back(*l);
  }
  return result;
}

UciAgent::UciAgent(AgentSpec spec)
    : Agent(std::move(spec)), engine_(this->spec().path, this->spec().options, this->spec().timeout_ms) {
  this->spec().validate();
}

MoveDistribution UciAgent::policy(const Position& p) {
  require_nonterminal(p);
  const auto legal = p.legal_moves();
  int width = spec().multipv > 0 ? std::min<int>(spec().multipv, static_cast<int>(legal.size()))
                                 : static_cast<int>(legal.size());
  UciSearchResult r = engine_.go_nodes(p, spec().effective_nodes(), width);
  std::vector<double> scores(legal.size(), 0.0);
  std::vector<bool> seen(legal.size(), false);
  double worst = 0.0;
  bool any = false;
  for (const auto& line : r.lines) {
    Move m = parse_engine_move(p, line.first_move);
    auto it = std::find(legal.begin(), legal.end(), m);
    auto i = static_cast<size_t>(it - legal.begin());
    scores[i] = line.score.centipawns;
    seen[i] = true;
    worst = any ? std::min(worst, line.score.centipawns) : line.score.centipawns;
    any = true;
  }
  if (!any) {
    // Engine gave no scored lines; fall back to its bestmove.
    return MoveDistribution::delta(parse_engine_move(p, r.bestmove));
  }
  for (size_t i = 0; i < legal.size(); ++i) {
    if (!seen[i]) scores[i] = worst - 200.0;
  }
  return MoveDistribution::softmax(legal, scores, spec().effective_temperature());
}

WinProb UciAgent::value(const Position& p) {
  if (auto t = terminal_winprob(p)) return *t;
  UciSearchResult r = engine_.go_nodes(p, spec().effective_nodes(), 1);
  if (r.lines.empty()) throw AgentError("engine reported no score");
  return WinProb{logistic_winprob(r.lines.front().score.centipawns, spec().slope)};
}

Move UciAgent::select_move(const Position& p, Rng& rng, SamplingMode mode) {
  if (mode == SamplingMode::kSample) return Agent::select_move(p, rng, mode);
  require_nonterminal(p);
  UciSearchResult r = engine_.go_nodes(p, spec().effective_nodes(), 1);
  return parse_engine_move(p, r.bestmove);
}

UciCentipawnEngine::UciCentipawnEngine(const AgentSpec& spec, uint64_t nodes)
    : engine_(spec.path, spec.options, spec.timeout_ms), nodes_(nodes) {}

double UciCentipawnEngine::centipawns(const Position& p) {
  UciSearchResult r = engine_.go_nodes(p, nodes_, 1);
  if (r.lines.empty()) throw AgentError("engine reported no score");
  return r.lines.front().score.centipawns;
}

}  // namespace skillcompat::agents
