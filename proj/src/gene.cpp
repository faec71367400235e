#include "gene.hpp"

#include <cmath>
#include <numeric>

#include "errors.hpp"
#include "hash.hpp"

namespace darwinnet {

std::vector<std::uint8_t> ProtocolGene::descriptor_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(64);
  append_le64(out, gene_id);
  append_le64(out, context.id);
  append_le64(out, policy_flags.size());
  for (const auto& flag : policy_flags) {  // std::set iterates in lexicographic order
    append_le64(out, flag.size());
    out.insert(out.end(), flag.begin(), flag.end());
  }
  append_le64(out, quota);
  append_le64(out, version);
  return out;
}

std::uint64_t ProtocolGene::compute_code_hash() const { return fnv1a64(descriptor_bytes()); }

std::uint64_t sign_tag(std::uint64_t code_hash, const SharedKey& key) {
  std::vector<std::uint8_t> bytes;
  append_le64(bytes, code_hash);
  return Fnv1a64{}.update(bytes).update(key.bytes).digest();
}

bool verify_tag(std::uint64_t code_hash, std::uint64_t tag, const SharedKey& key) {
  return sign_tag(code_hash, key) == tag;
}

ProtocolGene seal(ProtocolGene gene, const SharedKey& key) {
  gene.code_hash = gene.compute_code_hash();
  gene.signature_tag = sign_tag(gene.code_hash, key);
  return gene;
}

ProtocolGene make_baseline_gene(const SharedKey& key) {
  ProtocolGene g;
  g.gene_id = 0;
  g.context = ContextSignature::anchor();
  g.quota = unlimited_quota;
  g.synth_cycle = 0;
  g.version = 0;
  return seal(std::move(g), key);
}

GenePool::GenePool(std::size_t capacity) : capacity_(capacity) {
  if (capacity_ == 0) throw DomainError("gene pool capacity must be positive");
}

std::optional<ProtocolGene> GenePool::lookup(const ContextSignature& ctx) {
  auto it = index_.find(ctx);
  if (it == index_.end()) return std::nullopt;
  order_.splice(order_.begin(), order_, it->second);
  return *it->second;
}

std::optional<ProtocolGene> GenePool::insert(const ProtocolGene& gene) {
  if (auto it = index_.find(gene.context); it != index_.end()) {
    *it->second = gene;
    order_.splice(order_.begin(), order_, it->second);
    return std::nullopt;
  }
  order_.push_front(gene);
  index_.emplace(gene.context, order_.begin());
  if (index_.size() <= capacity_) return std::nullopt;
  ProtocolGene evicted = std::move(order_.back());
  index_.erase(evicted.context);
  order_.pop_back();
  return evicted;
}

std::size_t GenePool::invalidate_fraction(double fraction, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw DomainError("fraction must lie in [0, 1]");
  std::vector<ContextSignature> keys = keys_by_recency();
  const auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(keys.size())));
  // Partial Fisher-Yates: the first `count` slots become a uniform sample.
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(keys.size() - i));
    std::swap(keys[i], keys[j]);
    auto it = index_.find(keys[i]);
    order_.erase(it->second);
    index_.erase(it);
  }
  return count;
}

std::vector<ContextSignature> GenePool::keys_by_recency() const {
  std::vector<ContextSignature> out;
  out.reserve(order_.size());
  for (const auto& g : order_) out.push_back(g.context);
  return out;
}

std::string gene_table_to_csv(const std::map<std::uint64_t, ProtocolGene>& table) {
  std::string out = "gene_id,context_id,code_hash,flags,quota,synth_cycle,version\n";
  for (const auto& [id, g] : table) {
    std::string flags;
    for (const auto& f : g.policy_flags) {
      if (!flags.empty()) flags += ';';
      flags += f;
    }
    out += std::to_string(id) + ',' + std::to_string(g.context.id) + ',' + to_hex16(g.code_hash) + ',' +
           flags + ',' + (g.quota == unlimited_quota ? std::string("inf") : std::to_string(g.quota)) +
           ',' + std::to_string(g.synth_cycle) + ',' + std::to_string(g.version) + '\n';
  }
  return out;
}

}  // namespace darwinnet
