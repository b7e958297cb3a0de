#include "skillcompat/frameworks/game.hpp"

#include <array>
#include <functional>

#include "skillcompat/util/error.hpp"

namespace skillcompat::frameworks {

using agents::SamplingMode;

namespace {

template <typename E, size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E v) {
  for (auto [e, n] : table) {
    if (e == v) return n;
  }
  return "?";
}

template <typename E, size_t N>
E parse_name(const std::array<std::pair<E, std::string_view>, N>& table, std::string_view s, const char* what) {
  for (auto [e, n] : table) {
    if (n == s) return e;
  }
  throw ParseError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

constexpr std::array<std::pair<Framework, std::string_view>, 3> kFrameworks = {
    {{Framework::kStt, "stt"}, {Framework::kHb, "hb"}, {Framework::kPlain, "plain"}}};
constexpr std::array<std::pair<TeamRole, std::string_view>, 2> kRoles = {
    {{TeamRole::kFocal, "focal"}, {TeamRole::kAlter, "alter"}}};
constexpr std::array<std::pair<Actor, std::string_view>, 4> kActors = {{{Actor::kSenior, "senior"},
                                                                        {Actor::kJunior, "junior"},
                                                                        {Actor::kTeam, "team"},
                                                                        {Actor::kOpening, "opening"}}};
constexpr std::array<std::pair<InteractionType, std::string_view>, 4> kInteractions = {
    {{InteractionType::kAgreement, "agreement"},
     {InteractionType::kBlindsiding, "blindsiding"},
     {InteractionType::kCorrection, "correction"},
     {InteractionType::kDisagreement, "disagreement"}}};
constexpr std::array<std::pair<GameResult, std::string_view>, 4> kResults = {{{GameResult::kWhite, "white"},
                                                                             {GameResult::kBlack, "black"},
                                                                             {GameResult::kDraw, "draw"},
                                                                             {GameResult::kAborted, "aborted"}}};

// Independent RNG streams inside one game.
enum Stream : uint64_t { kWhiteSenior = 0, kWhiteJunior = 1, kBlackSenior = 2, kBlackJunior = 3, kOpener = 4 };

struct Seat {
  Team* team;
  Rng senior_rng;
  Rng junior_rng;
};

Move play_agent(Agent& agent, const Position& p, Rng& rng, SamplingMode role_default) {
  return agent.select_move(p, rng, agents::resolve_sampling(agent.spec(), role_default));
}

void require(const std::shared_ptr<Agent>& a, const char* what) {
  if (!a) throw ConfigError(std::string("team is missing its ") + what);
}

using PlyFn = std::function<PlyRecord(Seat& seat, const Position& p, size_t ply)>;

GameRecord run_game(Framework fw, Team& white, Team& black, uint64_t seed, const GameOptions& opts,
                    const PlyFn& choose) {
  if (opts.max_plies < 1) throw ConfigError("max_plies must be >= 1");
  if (opts.opening_plies < 0) throw ConfigError("opening_plies must be >= 0");
  if (opts.opening_plies > 0 && !opts.opener) throw ConfigError("opening plies need an opener agent");
  if (white.role == black.role) throw ConfigError("a game needs one focal and one alter team");

  GameRecord rec;
  rec.framework = fw;
  rec.seed = seed;
  rec.focal_color = white.role == TeamRole::kFocal ? Color::kWhite : Color::kBlack;
  Team& focal = white.role == TeamRole::kFocal ? white : black;
  Team& alter = white.role == TeamRole::kFocal ? black : white;
  auto name = [](const std::shared_ptr<Agent>& a) { return a ? a->name() : std::string(); };
  rec.focal_senior = name(focal.senior);
  rec.focal_junior = name(focal.junior);
  rec.alter_senior = name(alter.senior);
  rec.alter_junior = name(alter.junior);
  rec.start_fen = opts.start_fen;

  std::array<Seat, 2> seats = {Seat{&white, Rng(derive_seed(seed, kWhiteSenior)), Rng(derive_seed(seed, kWhiteJunior))},
                               Seat{&black, Rng(derive_seed(seed, kBlackSenior)), Rng(derive_seed(seed, kBlackJunior))}};
  Rng opener_rng(derive_seed(seed, kOpener));

  Position pos = Position::from_fen(opts.start_fen);
  std::vector<uint64_t> keys;
  chess::GameStatus status = chess::game_status_by_keys(pos, keys, opts.max_plies);
  try {
    while (!chess::is_terminal(status)) {
      const size_t ply = keys.size();
      const Color mover = pos.side_to_move();
      PlyRecord rec_ply;
      if (ply < static_cast<size_t>(opts.opening_plies)) {
        rec_ply.move = opts.opener->select_move(pos, opener_rng, SamplingMode::kSample);
        rec_ply.actor = Actor::kOpening;
      } else {
        rec_ply = choose(seats[static_cast<size_t>(chess::index(mover))], pos, ply);
      }
      rec_ply.team = rec.role_of(mover);
      Position next = pos.apply(rec_ply.move);
      rec.plies.push_back(std::move(rec_ply));
      keys.push_back(pos.key());
      pos = std::move(next);
      status = chess::game_status_by_keys(pos, keys, opts.max_plies);
    }
  } catch (const AgentError& e) {
    rec.result = GameResult::kAborted;
    rec.termination = "aborted";
    rec.abort_reason = e.what();
    return rec;
  } catch (const IllegalMoveError& e) {
    rec.result = GameResult::kAborted;
    rec.termination = "aborted";
    rec.abort_reason = std::string("illegal move: ") + e.what();
    return rec;
  } catch (const EmptySetError& e) {
    rec.result = GameResult::kAborted;
    rec.termination = "aborted";
    rec.abort_reason = e.what();
    return rec;
  }
  rec.termination = std::string(chess::to_string(status));
  if (status == chess::GameStatus::kCheckmate) {
    rec.result = pos.side_to_move() == Color::kWhite ? GameResult::kBlack : GameResult::kWhite;
  } else {
    rec.result = GameResult::kDraw;
  }
  return rec;
}

}  // namespace

std::string_view to_string(Framework f) { return name_of(kFrameworks, f); }
Framework framework_from_string(std::string_view s) { return parse_name(kFrameworks, s, "framework"); }
std::string_view to_string(TeamRole r) { return name_of(kRoles, r); }
TeamRole team_role_from_string(std::string_view s) { return parse_name(kRoles, s, "team role"); }
std::string_view to_string(Actor a) { return name_of(kActors, a); }
Actor actor_from_string(std::string_view s) { return parse_name(kActors, s, "actor"); }
std::string_view to_string(InteractionType t) { return name_of(kInteractions, t); }
InteractionType interaction_type_from_string(std::string_view s) {
  return parse_name(kInteractions, s, "interaction type");
}
std::string_view to_string(GameResult r) { return name_of(kResults, r); }
GameResult game_result_from_string(std::string_view s) { return parse_name(kResults, s, "game result"); }

int GameRecord::focal_score() const {
  if (result == GameResult::kDraw || result == GameResult::kAborted) return 0;
  const Color winner = result == GameResult::kWhite ? Color::kWhite : Color::kBlack;
  return winner == focal_color ? 1 : -1;
}

std::vector<Position> GameRecord::replay() const {
  std::vector<Position> out;
  out.reserve(plies.size() + 1);
  out.push_back(Position::from_fen(start_fen));
  for (const auto& ply : plies) out.push_back(out.back().apply(ply.move));
  return out;
}

GameRecord play_stt_game(Team& white, Team& black, const Bitstring& b, uint64_t seed, const GameOptions& opts) {
  for (Team* t : {&white, &black}) {
    require(t->senior, "senior");
    require(t->junior, "junior");
  }
  if (b.size() < static_cast<size_t>(opts.max_plies)) {
    throw ConfigError("bitstring '" + b.id() + "' is shorter than the ply limit");
  }
  if (opts.opening_plies != 0) throw ConfigError("STT games take no opening plies");
  GameRecord rec = run_game(Framework::kStt, white, black, seed, opts, [&](Seat& seat, const Position& p, size_t ply) {
    PlyRecord out;
    if (b.senior_at(ply)) {
      out.actor = Actor::kSenior;
      out.move = play_agent(*seat.team->senior, p, seat.senior_rng, SamplingMode::kArgmax);
    } else {
      out.actor = Actor::kJunior;
      out.move = play_agent(*seat.team->junior, p, seat.junior_rng, SamplingMode::kSample);
    }
    return out;
  });
  rec.bitstring_id = b.id();
  rec.bitstring = b.to_string(rec.plies.size());
  return rec;
}

GameRecord play_hb_game(Team& white, Team& black, uint64_t seed, const GameOptions& opts) {
  for (Team* t : {&white, &black}) {
    require(t->senior, "brain");
    require(t->junior, "hand");
  }
  return run_game(Framework::kHb, white, black, seed, opts, [](Seat& seat, const Position& p, size_t) {
    Agent& brain = *seat.team->senior;
    Agent& hand = *seat.team->junior;
    agents::BrainChoice choice = brain.choose_piece(p, seat.senior_rng);
    const auto legal = p.legal_moves();
    bool piece_ok = false;
    for (const auto& m : legal) piece_ok = piece_ok || p.at(m.from).type() == choice.piece;
    if (!piece_ok) {
      throw AgentError("brain '" + brain.name() + "' chose " + std::string(chess::to_string(choice.piece)) +
                       " with no legal move");
    }
    const SamplingMode hand_mode = agents::resolve_sampling(hand.spec(), SamplingMode::kSample);
    agents::MoveDistribution dist = hand.policy(p);
    auto draw = [&](const agents::MoveDistribution& d) -> Move {
      return hand_mode == SamplingMode::kArgmax ? d.argmax() : d.sample(seat.junior_rng);
    };

    HbPly hb;
    hb.piece = choice.piece;
    hb.intended = choice.intended;
    hb.hand_sample = draw(dist);
    PlyRecord out;
    out.actor = Actor::kTeam;
    const bool matches_brain = [&](const Move& m) { return choice.intended && m == *choice.intended; }(hb.hand_sample);
    if (p.at(hb.hand_sample.from).type() == choice.piece) {
      out.move = hb.hand_sample;
      hb.interaction = matches_brain ? InteractionType::kAgreement : InteractionType::kBlindsiding;
    } else {
      out.move = draw(agents::conditional_policy(dist, p, choice.piece));
      const bool corrected = choice.intended && out.move == *choice.intended;
      hb.interaction = corrected ? InteractionType::kCorrection : InteractionType::kDisagreement;
    }
    out.hb = hb;
    return out;
  });
}

GameRecord play_plain_game(Team& white, Team& black, uint64_t seed, const GameOptions& opts) {
  require(white.senior, "agent");
  require(black.senior, "agent");
  return run_game(Framework::kPlain, white, black, seed, opts, [](Seat& seat, const Position& p, size_t) {
    PlyRecord out;
    out.actor = Actor::kSenior;
    out.move = play_agent(*seat.team->senior, p, seat.senior_rng, SamplingMode::kArgmax);
    return out;
  });
}

}  // namespace skillcompat::frameworks
