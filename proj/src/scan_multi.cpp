// The 16,777,216-rule multi-asset scan: sharded, checkpointed, worker-pooled.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <set>
#include <thread>

#include "ifa/io.hpp"
#include "ifa/scan.hpp"

namespace ifa::scan {

namespace {

// Packed per-rule table for the hot loop: lut[state*k + sym] = next*k + action.
struct PackedRule {
  std::uint8_t lut[kMaxCells];
  int k;
};

PackedRule pack_rule(std::uint64_t number, int assets, const DigitConvention& conv) {
  const int k = 1 << assets;
  TransitionTable t = decode_rule({number, 2, k}, conv);
  PackedRule p{};
  p.k = k;
  for (int st = 0; st < 2; st++)
    for (int sym = 0; sym < k; sym++) {
      Transition tr = t.at(st + 1, sym);
      p.lut[st * k + sym] = std::uint8_t((tr.next_state - 1) * k + tr.action);
    }
  return p;
}

void evolve_packed(const PackedRule& r, int w, int steps, int up, std::uint8_t* out) {
  const int bps = r.k == 2 ? 1 : (r.k == 4 ? 2 : 3);
  const std::uint32_t sym0 = up == 1 ? std::uint32_t(r.k - 1) : 0;
  std::uint32_t win = 0;
  for (int i = 0; i < w; i++) win = (win << bps) | sym0;
  const std::uint32_t mask = (std::uint32_t(1) << (bps * w)) - 1;
  const std::uint32_t smask = (std::uint32_t(1) << bps) - 1;
  for (int t = 0; t < steps; t++) {
    int st = 0, e = 0;
    std::uint32_t x = win;
    for (int i = 0; i < w; i++) {
      e = r.lut[st * r.k + int(x & smask)];
      st = e / r.k;
      x >>= bps;
    }
    const int a = e % r.k;
    out[t] = std::uint8_t(a);
    win = ((win << bps) | std::uint32_t(a)) & mask;
  }
}

// Tail test on a bit series: some final 2p block is two equal p-blocks.
bool bits_visible_cycle(const std::uint8_t* x, int H) {
  for (int p = 1; 2 * p <= H; p++) {
    bool match = true;
    for (int t = H - 2 * p; t < H - p; t++)
      if (x[t] != x[t + p]) {
        match = false;
        break;
      }
    if (match) return true;
  }
  return false;
}

struct ShardOutput {
  std::uint64_t evaluated = 0;
  std::vector<std::uint64_t> pass;        // primary reading
  std::uint64_t alt_no_state_repeat = 0;  // alternative reading tally
};

ShardOutput scan_shard(std::uint64_t lo, std::uint64_t hi, const MultiScanParams& pp,
                       const DigitConvention& conv) {
  ShardOutput out;
  const int H = pp.horizon;
  std::vector<std::uint8_t> mov(std::size_t(H), 0);
  std::vector<std::uint8_t> x0(std::size_t(H), 0), x1(std::size_t(H), 0);
  std::vector<std::uint32_t> states(std::size_t(H) + 1, 0);
  const int bps = 2;
  const std::uint32_t wmask = (std::uint32_t(1) << (bps * pp.window)) - 1;
  const int upbit = conv.up_action & 1;
  for (std::uint64_t n = lo; n < hi; n++) {
    const PackedRule r = pack_rule(n, pp.assets, conv);
    evolve_packed(r, pp.window, H, conv.up_action, mov.data());
    out.evaluated++;
    for (int t = 0; t < H; t++) {
      x0[std::size_t(t)] = std::uint8_t(((mov[std::size_t(t)] >> 0) & 1) == upbit);
      x1[std::size_t(t)] = std::uint8_t(((mov[std::size_t(t)] >> 1) & 1) == upbit);
    }
    bool ident = true, opp = true;
    for (int t = 0; t < H && (ident || opp); t++) {
      if (x0[std::size_t(t)] != x1[std::size_t(t)]) ident = false;
      if (x0[std::size_t(t)] == x1[std::size_t(t)]) opp = false;
    }
    const bool corr_ok = !ident && !opp;
    if (corr_ok && !bits_visible_cycle(x0.data(), H) && !bits_visible_cycle(x1.data(), H))
      out.pass.push_back(n);
    // alternative reading: the joint window state never repeats inside the horizon
    if (corr_ok) {
      std::uint32_t win = conv.up_action == 1 ? wmask : 0;
      states[0] = win;
      for (int t = 0; t < H; t++) {
        win = ((win << bps) | std::uint32_t(mov[std::size_t(t)])) & wmask;
        states[std::size_t(t) + 1] = win;
      }
      std::sort(states.begin(), states.end());
      bool repeat = false;
      for (std::size_t i = 1; i < states.size(); i++)
        if (states[i] == states[i - 1]) {
          repeat = true;
          break;
        }
      if (!repeat) out.alt_no_state_repeat++;
    }
  }
  return out;
}

nlohmann::json shard_identity(const MultiScanParams& p, const std::string& calibration_digest) {
  return {{"assets", p.assets},         {"window", p.window},
          {"horizon", p.horizon},       {"begin", p.begin},
          {"end", p.end},               {"shard_size", p.shard_size},
          {"calibration", calibration_digest}};
}

std::filesystem::path shard_path(const std::filesystem::path& dir, long shard) {
  return dir / ("shard_" + std::to_string(shard) + ".json");
}

nlohmann::json shard_payload(const nlohmann::json& identity, long shard, const ShardOutput& out) {
  nlohmann::json j;
  j["scan"] = identity;
  j["shard"] = shard;
  j["evaluated"] = out.evaluated;
  j["pass_rules"] = out.pass;
  j["alt_no_state_repeat"] = out.alt_no_state_repeat;
  return j;
}

void write_checkpoint(const std::filesystem::path& dir, long shard, const nlohmann::json& identity,
                      const ShardOutput& out) {
  nlohmann::json j = shard_payload(identity, shard, out);
  j["checksum"] = io::hex64(io::fnv1a64(j.dump()));
  io::write_file_atomic(shard_path(dir, shard), j.dump() + "\n");
}

// nullopt when the file does not exist; throws on corruption or mismatch
std::optional<ShardOutput> load_checkpoint(const std::filesystem::path& dir, long shard,
                                           const nlohmann::json& identity) {
  const auto path = shard_path(dir, shard);
  if (!std::filesystem::exists(path)) return std::nullopt;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const std::exception&) {
    throw std::runtime_error("corrupt checkpoint (unparseable): " + path.string());
  }
  if (!j.contains("checksum") || !j.contains("scan"))
    throw std::runtime_error("corrupt checkpoint (missing fields): " + path.string());
  const std::string stored = j["checksum"].get<std::string>();
  nlohmann::json body = j;
  body.erase("checksum");
  if (io::hex64(io::fnv1a64(body.dump())) != stored)
    throw std::runtime_error("corrupt checkpoint (checksum mismatch): " + path.string());
  if (j["scan"] != identity)
    throw std::runtime_error("checkpoint belongs to a different scan: " + path.string());
  ShardOutput out;
  out.evaluated = j["evaluated"].get<std::uint64_t>();
  out.pass = j["pass_rules"].get<std::vector<std::uint64_t>>();
  out.alt_no_state_repeat = j["alt_no_state_repeat"].get<std::uint64_t>();
  return out;
}

} // namespace

DedupInfo dedup_rules(const std::vector<std::uint64_t>& passing, const MultiScanParams& params,
                      const DigitConvention& conv) {
  DedupInfo info;
  info.dup_of.resize(passing.size());
  std::map<std::vector<std::uint8_t>, std::uint64_t> groups;
  std::vector<std::uint8_t> mov(std::size_t(params.horizon), 0);
  for (std::size_t i = 0; i < passing.size(); i++) {
    const PackedRule r = pack_rule(passing[i], params.assets, conv);
    evolve_packed(r, params.window, params.horizon, conv.up_action, mov.data());
    auto [it, fresh] = groups.try_emplace(mov, passing[i]); // passing is ascending
    info.dup_of[i] = it->second;
  }
  info.distinct_evolutions = groups.size();
  std::set<std::uint64_t> classes;
  for (std::uint64_t n : passing) {
    const std::uint64_t partner = relabel_states({n, 2, 1 << params.assets}, conv).number;
    classes.insert(std::min(n, partner));
  }
  info.distinct_relabel_classes = classes.size();
  return info;
}

MultiScanResult scan_multi(const MultiScanParams& params, const DigitConvention& conv,
                           int workers,
                           const std::optional<std::filesystem::path>& checkpoint_dir,
                           bool resume, const std::string& calibration_digest) {
  if (params.begin >= params.end) throw std::invalid_argument("empty rule range");
  if (params.shard_size < 1) throw std::invalid_argument("shard_size must be >= 1");
  const std::uint64_t span = params.end - params.begin;
  const long nshards = long((span + params.shard_size - 1) / params.shard_size);
  const nlohmann::json identity = shard_identity(params, calibration_digest);

  std::vector<std::optional<ShardOutput>> shards;
  shards.resize(std::size_t(nshards));
  if (checkpoint_dir) std::filesystem::create_directories(*checkpoint_dir);
  if (resume) {
    if (!checkpoint_dir) throw std::invalid_argument("--resume needs a checkpoint dir");
    for (long s = 0; s < nshards; s++)
      shards[std::size_t(s)] = load_checkpoint(*checkpoint_dir, s, identity);
  }

  std::atomic<long> next{0};
  std::atomic<long> claimed{0};
  std::atomic<long> computed{0};
  const long budget = params.stop_after_shards;
  auto worker = [&]() {
    for (;;) {
      const long s = next.fetch_add(1);
      if (s >= nshards) return;
      if (shards[std::size_t(s)].has_value()) continue;
      if (budget >= 0 && claimed.fetch_add(1) >= budget) return;
      const std::uint64_t lo = params.begin + std::uint64_t(s) * params.shard_size;
      const std::uint64_t hi = std::min(params.end, lo + params.shard_size);
      ShardOutput out = scan_shard(lo, hi, params, conv);
      if (checkpoint_dir) write_checkpoint(*checkpoint_dir, s, identity, out);
      shards[std::size_t(s)] = std::move(out);
      computed.fetch_add(1);
    }
  };
  {
    std::vector<std::thread> pool;
    const int nw = std::max(1, workers);
    pool.reserve(std::size_t(nw));
    for (int i = 0; i < nw; i++) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  MultiScanResult res;
  res.params = params;
  res.shards_total = nshards;
  res.shards_computed = computed.load();
  res.complete = true;
  for (long s = 0; s < nshards; s++)
    if (!shards[std::size_t(s)].has_value()) res.complete = false;
  if (!res.complete) return res;

  std::vector<std::uint64_t> pass;
  std::uint64_t alt = 0;
  for (long s = 0; s < nshards; s++) {
    const ShardOutput& so = *shards[std::size_t(s)];
    res.evaluated += so.evaluated;
    pass.insert(pass.end(), so.pass.begin(), so.pass.end());
    alt += so.alt_no_state_repeat;
  }

  DedupInfo dd = dedup_rules(pass, params, conv);
  res.distinct_evolutions = dd.distinct_evolutions;
  res.distinct_relabel_classes = dd.distinct_relabel_classes;
  res.passing.reserve(pass.size());
  std::vector<std::uint8_t> mov(std::size_t(params.horizon), 0);
  for (std::size_t i = 0; i < pass.size(); i++) {
    const PackedRule r = pack_rule(pass[i], params.assets, conv);
    evolve_packed(r, params.window, params.horizon, conv.up_action, mov.data());
    double sx = 0, sy = 0, sxy = 0;
    const int upbit = conv.up_action & 1;
    for (int t = 0; t < params.horizon; t++) {
      const int a = ((mov[std::size_t(t)] >> 0) & 1) == upbit ? 1 : -1;
      const int b = ((mov[std::size_t(t)] >> 1) & 1) == upbit ? 1 : -1;
      sx += a;
      sy += b;
      sxy += a * b;
    }
    const double n = params.horizon;
    const double vx = n * n - sx * sx, vy = n * n - sy * sy;
    MultiPassRecord rec;
    rec.rule = pass[i];
    rec.correlation = (vx <= 0 || vy <= 0) ? std::nan("") : (n * sxy - sx * sy) / std::sqrt(vx * vy);
    rec.dup_of = dd.dup_of[i];
    res.passing.push_back(rec);
  }
  // stash the alternative-reading tally where the CLI can reach it
  res.alt_no_state_repeat = alt;
  return res;
}

} // namespace ifa::scan
