#include "egtlab/repeated.hpp"

#include <stdexcept>
#include <utility>

namespace egt {

std::string_view to_string(Action a) { return a == Action::Cooperate ? "C" : "D"; }

std::string_view to_string(ApologyRule r) {
  switch (r) {
    case ApologyRule::Never: return "Never";
    case ApologyRule::OnOwnErrorDefection: return "OnOwnErrorDefection";
    case ApologyRule::Always: return "Always";
  }
  return "?";
}

std::string_view to_string(AcceptanceRule r) {
  return r == AcceptanceRule::BelieveUnexposed ? "BelieveUnexposed" : "IgnoreApologies";
}

std::string_view to_string(ApologyStatus s) {
  switch (s) {
    case ApologyStatus::None: return "None";
    case ApologyStatus::Believed: return "Believed";
    case ApologyStatus::Exposed: return "Exposed";
  }
  return "?";
}

StrategyAutomaton::StrategyAutomaton(std::string name, std::vector<AutomatonState> states,
                                     std::size_t initial)
    : name_(std::move(name)), states_(std::move(states)), initial_(initial) {
  if (states_.empty()) throw std::invalid_argument("StrategyAutomaton: no states");
  if (initial_ >= states_.size()) throw std::invalid_argument("StrategyAutomaton: initial state out of range");
  for (const auto& s : states_)
    for (std::size_t target : s.next)
      if (target >= states_.size())
        throw std::invalid_argument("StrategyAutomaton: transition target out of range in state '" + s.name + "'");
}

namespace {

using TransitionFn = std::size_t (*)(Action own, Action partner, ApologyStatus status);

AutomatonState make_state(std::string name, Action intent, ApologyRule apology, AcceptanceRule acceptance,
                          TransitionFn fn) {
  AutomatonState s{std::move(name), intent, apology, acceptance, {}};
  for (Action own : {Action::Cooperate, Action::Defect})
    for (Action partner : {Action::Cooperate, Action::Defect})
      for (ApologyStatus st : {ApologyStatus::None, ApologyStatus::Believed, ApologyStatus::Exposed})
        s.next[AutomatonState::transition_index(own, partner, st)] = fn(own, partner, st);
  return s;
}

std::size_t stay(Action, Action, ApologyStatus) { return 0; }

// state 0 = cooperative, 1 = retaliating
std::size_t copy_partner(Action, Action partner, ApologyStatus) { return partner == Action::Cooperate ? 0 : 1; }

std::size_t copy_partner_forgiving(Action, Action partner, ApologyStatus status) {
  return partner == Action::Cooperate || status == ApologyStatus::Believed ? 0 : 1;
}

std::size_t grim_trigger(Action, Action partner, ApologyStatus) { return partner == Action::Cooperate ? 0 : 1; }
std::size_t punish_forever(Action, Action, ApologyStatus) { return 1; }

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"ALLC",       "ALLD",      "TFT",        "GRIM",
                                                 "APOLOGIZER", "EXPLOITER", "UNFORGIVING"};
  return names;
}

StrategyAutomaton preset(std::string_view name) {
  using enum Action;
  using enum ApologyRule;
  using enum AcceptanceRule;
  if (name == "ALLC") return {"ALLC", {make_state("c", Cooperate, Never, IgnoreApologies, stay)}};
  if (name == "ALLD") return {"ALLD", {make_state("d", Defect, Never, IgnoreApologies, stay)}};
  if (name == "TFT")
    return {"TFT",
            {make_state("c", Cooperate, Never, IgnoreApologies, copy_partner),
             make_state("d", Defect, Never, IgnoreApologies, copy_partner)}};
  if (name == "GRIM")
    return {"GRIM",
            {make_state("coop", Cooperate, Never, IgnoreApologies, grim_trigger),
             make_state("punish", Defect, Never, IgnoreApologies, punish_forever)}};
  if (name == "APOLOGIZER")
    return {"APOLOGIZER",
            {make_state("c", Cooperate, OnOwnErrorDefection, BelieveUnexposed, copy_partner_forgiving),
             make_state("d", Defect, OnOwnErrorDefection, BelieveUnexposed, copy_partner_forgiving)}};
  if (name == "EXPLOITER") return {"EXPLOITER", {make_state("d", Defect, Always, BelieveUnexposed, stay)}};
  if (name == "UNFORGIVING")
    return {"UNFORGIVING",
            {make_state("c", Cooperate, OnOwnErrorDefection, IgnoreApologies, copy_partner),
             make_state("d", Defect, OnOwnErrorDefection, IgnoreApologies, copy_partner)}};
  throw std::invalid_argument("preset: unknown strategy '" + std::string(name) + "'");
}

}  // namespace egt
