#include "doa/apps/insurance_claims.hpp"
#include "doa/sim/scenario.hpp"

namespace doa::sim {

namespace {

class ClaimsWorld final : public World {
 public:
  explicit ClaimsWorld(const Scenario& s)
      : rate_(s.param<double>("claim_rate")), flag_prob_(s.param<double>("flag_prob")) {}

  std::vector<Event> generate(Tick tick, Rng& rng) override {
    std::vector<Event> events;
    const Int n = rng.poisson(rate_);
    for (Int i = 0; i < n; ++i) {
      const std::string kind = draw_kind(rng);
      events.push_back({tick, "claims",
                        {{"amount", amount(rng)},
                         {"claim_id", next_claim_++},
                         {"flagged", rng.chance(flag_prob_)},
                         {"kind", kind},
                         {"prior_claims", prior_claims(rng)}}});
    }
    return events;
  }

 private:
  /// 70% auto; home and health share the rest.
  static std::string draw_kind(Rng& rng) {
    const double u = rng.uniform01();
    return u < 0.7 ? "auto" : u < 0.85 ? "home" : "health";
  }

  /// Mostly 0 to 2 earlier claims.
  static Int prior_claims(Rng& rng) {
    return rng.chance(0.85) ? rng.between(0, 2) : rng.between(3, 4);
  }

  /// Multiples of 250 from a small / medium / large mixture, kept clear of the
  /// rule thresholds at 1000 and 10000.
  static double amount(Rng& rng) {
    const double u = rng.uniform01();
    Int units;
    if (u < 0.4) {
      units = rng.between(1, 3);
    } else if (u < 0.99) {
      units = rng.between(5, 38);
    } else {
      units = rng.between(42, 46);
    }
    return static_cast<double>(units * 250);
  }

  double rate_;
  double flag_prob_;
  Int next_claim_ = 0;
};

}  // namespace

std::unique_ptr<World> make_claims_world(const Scenario& scenario) {
  return std::make_unique<ClaimsWorld>(scenario);
}

}  // namespace doa::sim
