#pragma once

// Event-driven evolution of the particle system: between events every block
// follows a closed-form trajectory and every member carries a closed-form
// prescribed velocity, so collision and break-up times are found by exact
// root solves (quadratic / damped-exponential / oscillatory) instead of time
// stepping. Collisions pool velocities by isotonic regression over the
// contact group; blocks break apart exactly when an interior prefix sum of
// prescribed-velocity deviations hits zero with outward forcing.

#include <string>
#include <vector>

#include "sticky1d/cone.hpp"
#include "sticky1d/forces.hpp"
#include "sticky1d/measures.hpp"

namespace sticky {

// A maximal group of members sharing one trajectory. Anchored at time t0:
// position/velocity there are (x0, v0) and the closed form extends from the
// anchor. abar is the mass-mean position-independent acceleration.
struct Block {
  int lo = 0, hi = 0;  // inclusive member range
  double t0 = 0.0;
  double x0 = 0.0, v0 = 0.0;
  double abar = 0.0;
  double mass = 0.0;

  int size() const { return hi - lo + 1; }
};

struct Event {
  enum class Kind { Collision, Split, Graze };

  double t = 0.0;
  Kind kind = Kind::Collision;
  int lo = 0, hi = 0;  // inclusive member range involved
  double ke_before = 0.0, ke_after = 0.0;  // block kinetic energy (1/2 M v^2)
  std::string detail;
};

const char* to_string(Event::Kind k);

struct Snapshot {
  double t = 0.0;
  std::vector<double> x, v, u;   // per member: position, velocity, prescribed
  std::vector<Block> blocks;
  // Front speed per block measured by finite differences on the trajectory
  // (centered away from the block's birth, one-sided second order at it).
  std::vector<double> fd_speed;
};

struct SimResult {
  std::vector<Snapshot> snapshots;
  std::vector<Event> events;
  bool aborted = false;
  std::string abort_reason;
};

class ParticleSystem {
 public:
  // Normalizes the seed: members sharing a position are pooled by isotonic
  // regression of their velocities, then marginal contacts break up
  // immediately. Any resulting time-zero events are recorded.
  ParticleSystem(const ParticleSeed& seed, const ForceModel& model);

  const ForceModel& force_model() const { return model_; }
  double time() const { return t_; }
  int member_count() const { return static_cast<int>(mass_.size()); }
  const std::vector<double>& masses() const { return mass_; }
  const std::vector<double>& theta() const { return theta_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const std::vector<Event>& events() const { return events_; }
  bool aborted() const { return aborted_; }
  const std::string& abort_reason() const { return abort_reason_; }
  double mean_x0() const { return xbar0_; }
  double mean_v0() const { return vbar0_; }

  // Closed-form evaluation; valid for any t (the form extends analytically
  // past events, which snapshots exploit for finite differences).
  double block_position(const Block& b, double t) const;
  double block_velocity(const Block& b, double t) const;
  // Prescribed velocity of member j at time t under its current block.
  double member_prescribed(int j, double t) const;

  std::vector<double> member_positions() const;
  std::vector<double> member_velocities() const;
  std::vector<double> member_prescribed_all() const;

  Snapshot snapshot() const;

  // Process all events up to t_end and leave the clock there. Stops early
  // if the event budget is exhausted (aborted() turns true).
  void advance(double t_end);

 private:
  struct NodeRoot {
    int node = 0;       // local: split between member node-1 and node
    double delta = 0.0; // time from block anchor
  };

  void rebuild_member_index();
  void recompute_roots();
  double split_roots(const Block& b, std::vector<NodeRoot>* nodes) const;
  double collision_root(const Block& bl, const Block& br) const;
  void process_events_at(double tau);
  void process_events_at(double tau, bool constructing);
  double kinetic_in_range(int lo, int hi, double t) const;

  ForceModel model_;
  double t_ = 0.0;
  double horizon_ = 0.0;
  std::vector<double> mass_, theta_;  // theta has size n+1
  std::vector<double> accel_;         // per-member position-independent part
  std::vector<double> u0_;            // member prescribed velocity at anchor
  std::vector<Block> blocks_;
  std::vector<int> block_of_;         // member -> block index
  std::vector<Event> events_;
  std::vector<double> pair_time_;     // absolute next contact per adjacent pair
  std::vector<double> split_time_;    // absolute next break-up per block
  bool roots_dirty_ = true;
  bool aborted_ = false;
  std::string abort_reason_;
  double xbar0_ = 0.0, vbar0_ = 0.0;  // global mean anchors at time 0
  std::size_t event_budget_ = 0;
};

// Run the event-driven dynamics, recording a snapshot at each sample time
// (nondecreasing, within [0, t_end]). Snapshots at an event time see the
// post-event state.
SimResult simulate(const ParticleSeed& seed, const ForceModel& model,
                   double t_end, const std::vector<double>& sample_times);

// Collisionless flow of each member followed by metric projection onto the
// monotone cone at every sample time: positions are the isotonic regression
// of the free positions, velocities the pooled means of the free velocities.
std::vector<Snapshot> simulate_projected(const ParticleSeed& seed,
                                         const ForceModel& model,
                                         const std::vector<double>& sample_times);

}  // namespace sticky
