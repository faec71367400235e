#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <list>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fault_process.hpp"
#include "random.hpp"

namespace darwinnet {

// Identifies an environment/intent context class. The id packs the event
// source (high 32 bits, 0 reserved for the baseline anchor) and the class
// index within that source.
struct ContextSignature {
  std::uint64_t id = 0;

  static ContextSignature of(EventSource source, std::uint32_t class_index) {
    const std::uint64_t tag = source == EventSource::base ? 1 : 2;
    return {(tag << 32) | class_index};
  }
  static constexpr ContextSignature anchor() { return {0}; }

  friend auto operator<=>(const ContextSignature&, const ContextSignature&) = default;
};

struct ContextSignatureHash {
  std::size_t operator()(const ContextSignature& c) const noexcept {
    return std::hash<std::uint64_t>{}(c.id);
  }
};

inline constexpr std::uint64_t unlimited_quota = std::numeric_limits<std::uint64_t>::max();

// Key shared by both nodes for signature tags.
struct SharedKey {
  std::string bytes;
};

// An opaque stand-in for a synthesized protocol module.
struct ProtocolGene {
  std::uint64_t gene_id = 0;
  ContextSignature context;
  std::uint64_t code_hash = 0;
  std::uint64_t signature_tag = 0;
  std::set<std::string> policy_flags;
  std::uint64_t quota = unlimited_quota;
  std::int64_t synth_cycle = 0;
  std::uint64_t version = 1;

  // Canonical encoding of the hashed descriptor fields in declaration order:
  // gene_id, context, policy_flags (count, then length + bytes per flag in
  // lexicographic order), quota, version. Integers are 8-byte little-endian.
  std::vector<std::uint8_t> descriptor_bytes() const;

  std::uint64_t compute_code_hash() const;

  bool is_baseline() const { return version == 0; }

  friend bool operator==(const ProtocolGene&, const ProtocolGene&) = default;
};

std::uint64_t sign_tag(std::uint64_t code_hash, const SharedKey& key);
bool verify_tag(std::uint64_t code_hash, std::uint64_t tag, const SharedKey& key);

// Fills code_hash and signature_tag from the descriptor fields.
ProtocolGene seal(ProtocolGene gene, const SharedKey& key);

// Version 0, no flags, unlimited quota.
ProtocolGene make_baseline_gene(const SharedKey& key);

// LRU cache of solidified genes keyed by context.
class GenePool {
 public:
  explicit GenePool(std::size_t capacity = 64);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return index_.size(); }
  bool contains(const ContextSignature& ctx) const { return index_.contains(ctx); }

  // A hit refreshes recency.
  std::optional<ProtocolGene> lookup(const ContextSignature& ctx);

  // Stores gene under its context (replacing any previous entry) as the most
  // recent entry; returns the least-recent entry when capacity is exceeded.
  std::optional<ProtocolGene> insert(const ProtocolGene& gene);

  // Removes ceil(fraction * size()) entries chosen uniformly without
  // replacement; returns the number removed.
  std::size_t invalidate_fraction(double fraction, Rng& rng);

  // Contexts from most to least recently used.
  std::vector<ContextSignature> keys_by_recency() const;

 private:
  using Order = std::list<ProtocolGene>;

  std::size_t capacity_;
  Order order_;  // front = most recent
  std::unordered_map<ContextSignature, Order::iterator, ContextSignatureHash> index_;
};

// Gene table dump: gene_id, context_id, code_hash, flags, quota, synth_cycle, version.
std::string gene_table_to_csv(const std::map<std::uint64_t, ProtocolGene>& table);

}  // namespace darwinnet
