#include "chunkwise/schedule.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace chunkwise {

namespace {

constexpr std::uint64_t kMaxIterations = UINT64_MAX / 4;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

WorkerWeights WorkerWeights::uniform(std::uint32_t p) {
  WorkerWeights w;
  w.w_.assign(p, Rational(1));
  return w;
}

WorkerWeights WorkerWeights::normalized(std::span<const Rational> raw) {
  if (raw.empty()) throw std::invalid_argument("WorkerWeights: empty weight vector");
  Rational sum(0);
  for (const Rational& r : raw) {
    if (r <= Rational(0)) throw std::invalid_argument("WorkerWeights: weights must be positive");
    sum += r;
  }
  const Rational scale = Rational(static_cast<std::int64_t>(raw.size())) / sum;
  WorkerWeights w;
  w.w_.reserve(raw.size());
  for (const Rational& r : raw) w.w_.push_back(r * scale);
  return w;
}

std::string ScheduleKind::name() const {
  switch (technique) {
    case Technique::kStaticBlock: return "STATIC";
    case Technique::kStaticCyclic: return "CYCLIC";
    case Technique::kDynamic: return "DYN:" + std::to_string(chunk);
    case Technique::kSelf: return "SS";
    case Technique::kGss: return "GSS";
    case Technique::kGuided: return "GUIDED:" + std::to_string(min_chunk);
    case Technique::kTss: return "TSS";
    case Technique::kFac2: return "FAC2";
    case Technique::kWf2: return "WF2";
    case Technique::kRand: return "RAND";
  }
  return "?";
}

ScheduleKind parse_schedule(std::string_view spec) {
  const std::string s = lower(spec);
  std::string head = s;
  std::string arg;
  if (auto colon = s.find(':'); colon != std::string::npos) {
    head = s.substr(0, colon);
    arg = s.substr(colon + 1);
  }
  auto uint_arg = [&](std::uint64_t fallback) -> std::uint64_t {
    if (arg.empty()) return fallback;
    std::size_t pos = 0;
    unsigned long long v = std::stoull(arg, &pos);
    if (pos != arg.size() || v == 0)
      throw std::invalid_argument("schedule '" + std::string(spec) + "': bad chunk parameter");
    return v;
  };
  if (head == "static" || head == "block") return ScheduleKind::static_block();
  if (head == "cyclic" || head == "static1") return ScheduleKind::static_cyclic();
  if (head == "ss") return ScheduleKind::self_scheduling();
  if (head == "dynamic" || head == "dyn") return ScheduleKind::dynamic(uint_arg(1));
  if (head == "gss") return ScheduleKind::gss();
  if (head == "guided") return ScheduleKind::guided(uint_arg(1));
  if (head == "tss") return ScheduleKind::tss();
  if (head == "fac2") return ScheduleKind::fac2();
  if (head == "rand" || head == "random") return ScheduleKind::rand(0);
  if (head == "wf2") {
    if (arg.empty()) return ScheduleKind::wf2();
    std::vector<Rational> raw;
    std::size_t begin = 0;
    while (begin <= arg.size()) {
      std::size_t end = arg.find('/', begin);
      if (end == std::string::npos) end = arg.size();
      raw.push_back(Rational::parse(arg.substr(begin, end - begin)));
      begin = end + 1;
    }
    return ScheduleKind::wf2(WorkerWeights::normalized(raw));
  }
  throw std::invalid_argument(
      "unknown schedule '" + std::string(spec) +
      "' (valid: static, cyclic, ss, dynamic:k, gss, guided:kmin, tss, fac2, wf2[:w0/w1/...], rand)");
}

Scheduler::Scheduler(const ScheduleKind& kind, LoopSpec loop, bool strict_batches)
    : kind_(kind), loop_(loop), strict_batches_(strict_batches), remaining_(loop.n) {
  if (loop_.p < 1) throw std::invalid_argument("Scheduler: worker count must be >= 1");
  if (loop_.n > kMaxIterations) throw std::overflow_error("Scheduler: iteration count too large");
  const std::uint64_t n = loop_.n;
  const std::uint64_t p = loop_.p;

  switch (kind_.technique) {
    case Technique::kStaticBlock:
    case Technique::kStaticCyclic:
      claimed_.assign(loop_.p, 0);
      break;
    case Technique::kDynamic:
      if (kind_.chunk < 1) throw std::invalid_argument("Dynamic: chunk size must be >= 1");
      break;
    case Technique::kSelf:
      kind_.chunk = 1;
      break;
    case Technique::kGuided:
      if (kind_.min_chunk < 1) throw std::invalid_argument("Guided: minimum chunk must be >= 1");
      break;
    case Technique::kGss:
      break;
    case Technique::kTss: {
      // f = ceil(n/2p), l = 1, C = ceil(2n/(f+l)), delta = (f-l)/(C-1).
      tss_.first = std::max<std::uint64_t>(1, ceil_div(n, 2 * p));
      tss_.last = 1;
      tss_.count = n == 0 ? 0 : ceil_div(2 * n, tss_.first + tss_.last);
      tss_.step = tss_.count > 1
                      ? Rational(static_cast<std::int64_t>(tss_.first - tss_.last),
                                 static_cast<std::int64_t>(tss_.count - 1))
                      : Rational(0);
      break;
    }
    case Technique::kFac2:
      break;
    case Technique::kWf2:
      if (kind_.weights.size() != loop_.p)
        throw std::invalid_argument("WF2: weight vector length must equal worker count");
      wf2_batch_r_.push_back(n);
      wf2_worker_batch_.assign(loop_.p, 0);
      break;
    case Technique::kRand:
      rand_lo_ = std::max<std::uint64_t>(1, n / (100 * p));
      rand_hi_ = std::max<std::uint64_t>(rand_lo_ + 1, n / (2 * p));
      rng_ = SplitMix64(kind_.seed);
      break;
  }
}

std::uint64_t Scheduler::wf2_nominal_chunk(std::uint32_t worker, std::size_t batch) {
  const Rational& w = kind_.weights[worker];
  const std::uint64_t r_batch = wf2_batch_r_[batch];
  // max(1, ceil(w_j * R_batch / 2p)), evaluated exactly.
  const uint128 numer = uint128(w.num()) * r_batch;
  const uint128 denom = uint128(w.den()) * 2 * loop_.p;
  return std::max<std::uint64_t>(1, ceil_div_u128(numer, denom));
}

void Scheduler::wf2_extend_batches(std::size_t batch) {
  while (wf2_batch_r_.size() <= batch) {
    const std::size_t prev = wf2_batch_r_.size() - 1;
    uint128 consumed = 0;
    for (std::uint32_t j = 0; j < loop_.p; ++j) consumed += wf2_nominal_chunk(j, prev);
    const std::uint64_t r_prev = wf2_batch_r_[prev];
    wf2_batch_r_.push_back(consumed >= r_prev ? 0 : r_prev - static_cast<std::uint64_t>(consumed));
  }
}

std::uint64_t Scheduler::wf2_open_batch() const {
  return *std::min_element(wf2_worker_batch_.begin(), wf2_worker_batch_.end());
}

std::uint64_t Scheduler::rule_size(std::uint32_t worker) {
  const std::uint64_t r = remaining_;
  const std::uint64_t p = loop_.p;
  switch (kind_.technique) {
    case Technique::kDynamic:
    case Technique::kSelf:
      return kind_.chunk;
    case Technique::kGss:
      return ceil_div(r, p);
    case Technique::kGuided:
      return std::max(kind_.min_chunk, ceil_div(r, p));
    case Technique::kTss: {
      if (tss_index_ >= tss_.count) return 1;  // conservation clamp: unit chunks
      // floor(f - i*delta), never below l = 1.
      const Rational value = Rational(static_cast<std::int64_t>(tss_.first)) -
                             Rational(static_cast<std::int64_t>(tss_index_)) * tss_.step;
      ++tss_index_;
      const std::int64_t sz = value.floor();
      return sz < 1 ? 1 : static_cast<std::uint64_t>(sz);
    }
    case Technique::kFac2: {
      if (batch_left_ == 0) {
        batch_size_ = std::max<std::uint64_t>(1, ceil_div(r, 2 * p));
        batch_left_ = loop_.p;
      }
      --batch_left_;
      return batch_size_;
    }
    case Technique::kWf2: {
      const std::uint64_t b = wf2_worker_batch_[worker];
      wf2_extend_batches(b);
      ++wf2_worker_batch_[worker];
      return wf2_nominal_chunk(worker, b);
    }
    case Technique::kRand:
      return rand_lo_ + rng_.next_below(rand_hi_ - rand_lo_ + 1);
    case Technique::kStaticBlock:
    case Technique::kStaticCyclic:
      break;  // handled in next()
  }
  return 0;
}

NextChunk Scheduler::next(std::uint32_t worker) {
  if (worker >= loop_.p) throw std::out_of_range("Scheduler::next: invalid worker id");
  if (remaining_ == 0) return {NextStatus::kExhausted, {}};

  Chunk chunk;
  chunk.worker = worker;

  // Static techniques serve each worker its own predetermined ranges.
  if (kind_.technique == Technique::kStaticBlock) {
    if (claimed_[worker] > 0) return {NextStatus::kExhausted, {}};
    const std::uint64_t block = ceil_div(loop_.n, loop_.p);
    const std::uint64_t begin = worker * block;
    if (begin >= loop_.n) return {NextStatus::kExhausted, {}};
    claimed_[worker] = 1;
    chunk.start = begin;
    chunk.size = std::min(block, loop_.n - begin);
  } else if (kind_.technique == Technique::kStaticCyclic) {
    const std::uint64_t iter = worker + claimed_[worker] * loop_.p;
    if (iter >= loop_.n) return {NextStatus::kExhausted, {}};
    ++claimed_[worker];
    chunk.start = iter;
    chunk.size = 1;
  } else {
    if (kind_.technique == Technique::kWf2 && strict_batches_ &&
        wf2_worker_batch_[worker] > wf2_open_batch())
      return {NextStatus::kWaiting, {}};
    chunk.start = next_start_;
    chunk.size = std::min(rule_size(worker), remaining_);
    next_start_ += chunk.size;
  }

  chunk.seq = next_seq_++;
  remaining_ -= chunk.size;
  return {NextStatus::kServed, chunk};
}

std::vector<Chunk> chunk_trace(const ScheduleKind& kind, LoopSpec loop,
                               std::span<const std::uint32_t> request_order) {
  std::vector<std::uint32_t> order(request_order.begin(), request_order.end());
  if (order.empty()) {
    order.resize(loop.p);
    for (std::uint32_t w = 0; w < loop.p; ++w) order[w] = w;
  }
  for (std::uint32_t w : order)
    if (w >= loop.p) throw std::invalid_argument("chunk_trace: request order names an invalid worker");

  Scheduler scheduler(kind, loop, /*strict_batches=*/true);
  std::vector<Chunk> trace;
  std::vector<bool> exhausted(loop.p, false);
  std::uint32_t live = loop.p;
  while (live > 0 && scheduler.remaining() > 0) {
    bool progress = false;
    for (std::uint32_t w : order) {
      if (exhausted[w]) continue;
      NextChunk r = scheduler.next(w);
      switch (r.status) {
        case NextStatus::kServed:
          trace.push_back(r.chunk);
          progress = true;
          break;
        case NextStatus::kExhausted:
          exhausted[w] = true;
          --live;
          progress = true;
          break;
        case NextStatus::kWaiting:
          break;
      }
    }
    if (!progress)
      throw std::invalid_argument("chunk_trace: request order starves the open batch");
  }
  return trace;
}

}  // namespace chunkwise
