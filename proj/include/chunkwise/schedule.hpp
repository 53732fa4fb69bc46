#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chunkwise/prng.hpp"
#include "chunkwise/rational.hpp"

namespace chunkwise {

/// A scheduling problem instance: n loop iterations over p workers.
struct LoopSpec {
  std::uint64_t n = 0;
  std::uint32_t p = 1;
};

/// Per-worker weights for weighted factoring, kept as exact rationals and
/// normalized so they sum to exactly p. All-equal input normalizes to
/// all-ones.
class WorkerWeights {
 public:
  WorkerWeights() = default;

  static WorkerWeights uniform(std::uint32_t p);
  /// Normalizes raw positive weights so the sum equals raw.size() exactly.
  static WorkerWeights normalized(std::span<const Rational> raw);

  [[nodiscard]] bool empty() const { return w_.empty(); }
  [[nodiscard]] std::uint32_t size() const { return static_cast<std::uint32_t>(w_.size()); }
  [[nodiscard]] const Rational& operator[](std::uint32_t j) const { return w_[j]; }
  [[nodiscard]] const std::vector<Rational>& values() const { return w_; }

  friend bool operator==(const WorkerWeights&, const WorkerWeights&) = default;

 private:
  std::vector<Rational> w_;
};

enum class Technique : std::uint8_t {
  kStaticBlock,   // schedule(static,chunk): p blocks of ceil(n/p), last truncated
  kStaticCyclic,  // schedule(static,1): iteration i on worker i mod p
  kDynamic,       // schedule(dynamic,k): constant chunk k
  kSelf,          // SS = schedule(dynamic,1)
  kGss,           // schedule(guided): ceil(R/p)
  kGuided,        // guided with a minimum chunk: max(kmin, ceil(R/p))
  kTss,           // trapezoid: linear descent from ceil(n/2p) to 1
  kFac2,          // factoring: batches of p equal chunks of ceil(R/2p)
  kWf2,           // weighted factoring: per-worker share of each batch
  kRand,          // uniform chunk size in [lo, hi]
};

/// Technique selector plus its parameters.
struct ScheduleKind {
  Technique technique = Technique::kStaticBlock;
  std::uint64_t chunk = 1;      // Dynamic(k)
  std::uint64_t min_chunk = 1;  // Guided(kmin)
  WorkerWeights weights;        // WF2; empty means "resolve from context"
  std::uint64_t seed = 0;       // RAND

  static ScheduleKind static_block() { return {Technique::kStaticBlock}; }
  static ScheduleKind static_cyclic() { return {Technique::kStaticCyclic}; }
  static ScheduleKind dynamic(std::uint64_t k) {
    ScheduleKind s{Technique::kDynamic};
    s.chunk = k;
    return s;
  }
  static ScheduleKind self_scheduling() { return {Technique::kSelf}; }
  static ScheduleKind gss() { return {Technique::kGss}; }
  static ScheduleKind guided(std::uint64_t kmin) {
    ScheduleKind s{Technique::kGuided};
    s.min_chunk = kmin;
    return s;
  }
  static ScheduleKind tss() { return {Technique::kTss}; }
  static ScheduleKind fac2() { return {Technique::kFac2}; }
  static ScheduleKind wf2(WorkerWeights w = {}) {
    ScheduleKind s{Technique::kWf2};
    s.weights = std::move(w);
    return s;
  }
  static ScheduleKind rand(std::uint64_t seed) {
    ScheduleKind s{Technique::kRand};
    s.seed = seed;
    return s;
  }

  [[nodiscard]] ScheduleKind with_seed(std::uint64_t s) const {
    ScheduleKind k = *this;
    k.seed = s;
    return k;
  }
  [[nodiscard]] ScheduleKind with_weights(WorkerWeights w) const {
    ScheduleKind k = *this;
    k.weights = std::move(w);
    return k;
  }

  /// Stable display name: STATIC, CYCLIC, DYN:k, SS, GSS, GUIDED:k, TSS,
  /// FAC2, WF2, RAND.
  [[nodiscard]] std::string name() const;
};

/// Parses a schedule spec string as accepted on the command line:
/// static | cyclic | ss | dynamic[:k] | gss | guided[:kmin] | tss | fac2 |
/// wf2[:w0/w1/...] | rand (case-insensitive). Throws std::invalid_argument
/// with the valid-name list on unknown input.
ScheduleKind parse_schedule(std::string_view spec);

/// A contiguous index range claimed by one worker. seq is the global claim
/// sequence number, starting at 0.
struct Chunk {
  std::uint64_t start = 0;
  std::uint64_t size = 0;
  std::uint32_t worker = 0;
  std::uint64_t seq = 0;

  friend bool operator==(const Chunk&, const Chunk&) = default;
};

enum class NextStatus : std::uint8_t {
  kServed,
  kWaiting,    // WF2 under strict batch boundaries only: retry after the open batch closes
  kExhausted,  // no more work will ever be served to this worker
};

struct NextChunk {
  NextStatus status = NextStatus::kExhausted;
  Chunk chunk;  // valid iff status == kServed
};

/// Deterministic chunk-size generator for one loop instance. Single-owner
/// mutable state: next() is not synchronized; concurrent users must claim
/// under a critical section (see the executor).
///
/// Exhaustion: dynamic techniques report kExhausted exactly when no
/// iterations remain; STATIC/CYCLIC report it per worker once that worker's
/// static assignment is drained.
///
/// WF2 batch semantics: batch b's per-worker chunk sizes are fixed by the
/// remaining-iteration count at the batch's opening, which is itself fully
/// determined by the sizes of batch b-1 — so every worker's chunk sequence
/// is predetermined. In the default (live) mode a worker that requests again
/// while the current batch is still open is served its next-batch chunk
/// immediately; in strict mode (used by chunk_trace) the request reports
/// kWaiting until every worker has claimed its chunk of the open batch.
class Scheduler {
 public:
  Scheduler(const ScheduleKind& kind, LoopSpec loop, bool strict_batches = false);

  /// Claims the next chunk for `worker`. Throws std::out_of_range on an
  /// invalid worker id.
  NextChunk next(std::uint32_t worker);

  [[nodiscard]] std::uint64_t remaining() const { return remaining_; }
  [[nodiscard]] const LoopSpec& loop() const { return loop_; }
  [[nodiscard]] const ScheduleKind& kind() const { return kind_; }

  // TSS descriptor (valid for kTss).
  struct TssParams {
    std::uint64_t first = 0;  // f
    std::uint64_t last = 0;   // l
    std::uint64_t count = 0;  // C
    Rational step;            // delta
  };
  [[nodiscard]] const TssParams& tss_params() const { return tss_; }

  // RAND chunk-size bounds (valid for kRand).
  [[nodiscard]] std::uint64_t rand_lo() const { return rand_lo_; }
  [[nodiscard]] std::uint64_t rand_hi() const { return rand_hi_; }

 private:
  std::uint64_t rule_size(std::uint32_t worker);  // 0 = nothing for this worker
  std::uint64_t wf2_nominal_chunk(std::uint32_t worker, std::size_t batch);
  void wf2_extend_batches(std::size_t batch);
  [[nodiscard]] std::uint64_t wf2_open_batch() const;

  ScheduleKind kind_;
  LoopSpec loop_;
  bool strict_batches_ = false;

  std::uint64_t remaining_ = 0;
  std::uint64_t next_start_ = 0;
  std::uint64_t next_seq_ = 0;

  // STATIC/CYCLIC: chunks already claimed by each worker.
  std::vector<std::uint64_t> claimed_;

  // FAC2: the open batch's chunk size and requests left in it.
  std::uint64_t batch_size_ = 0;
  std::uint32_t batch_left_ = 0;

  // WF2: nominal remaining count at each batch opening, extended lazily,
  // and each worker's next batch index.
  std::vector<std::uint64_t> wf2_batch_r_;
  std::vector<std::uint64_t> wf2_worker_batch_;

  TssParams tss_;
  std::uint64_t tss_index_ = 0;

  std::uint64_t rand_lo_ = 0;
  std::uint64_t rand_hi_ = 0;
  SplitMix64 rng_{0};
};

/// Full deterministic replay: workers request in the given cyclic order
/// (empty = round-robin 0..p-1) until every worker is exhausted. The
/// resulting chunks partition [0, n) exactly. WF2 runs under strict batch
/// boundaries, so a worker listed twice within one batch simply waits.
/// Throws std::invalid_argument if the order references an invalid worker or
/// omits a worker that the technique still needs.
std::vector<Chunk> chunk_trace(const ScheduleKind& kind, LoopSpec loop,
                               std::span<const std::uint32_t> request_order = {});

}  // namespace chunkwise
