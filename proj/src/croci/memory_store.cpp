#include <map>
#include <set>
#include <utility>

#include "croci/error.hpp"
#include "croci/store.hpp"

namespace croci {

void refresh_timespan(StoredCitation& citation) {
  if (citation.citing_date && citation.cited_date) {
    citation.timespan = compute_timespan(*citation.citing_date, *citation.cited_date);
  } else {
    citation.timespan.reset();
  }
}

namespace {

// Orders by full key and lets a bare Doi act as the lower bound of the range
// sharing that leading DOI.
struct LeadingLess {
  using is_transparent = void;
  bool operator()(const CitationKey& a, const CitationKey& b) const { return a < b; }
  bool operator()(const CitationKey& a, const Doi& b) const { return a.citing < b; }
  bool operator()(const Doi& a, const CitationKey& b) const { return a < b.citing; }
  bool operator()(const std::pair<Doi, Doi>& a, const std::pair<Doi, Doi>& b) const {
    return a < b;
  }
  bool operator()(const std::pair<Doi, Doi>& a, const Doi& b) const { return a.first < b; }
  bool operator()(const Doi& a, const std::pair<Doi, Doi>& b) const { return a < b.first; }
};

class MemoryStore final : public Store {
 public:
  std::optional<StoredCitation> find(const CitationKey& key) const override {
    auto it = primary_.find(key);
    if (it == primary_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<StoredCitation> outgoing(const Doi& citing) const override {
    std::vector<StoredCitation> out;
    for (auto it = primary_.lower_bound(citing);
         it != primary_.end() && it->first.citing == citing; ++it) {
      out.push_back(it->second);
    }
    return out;
  }

  std::vector<StoredCitation> incoming(const Doi& cited) const override {
    std::vector<StoredCitation> out;
    for (auto it = by_cited_.lower_bound(cited);
         it != by_cited_.end() && it->first == cited; ++it) {
      out.push_back(primary_.at(CitationKey{it->second, it->first}));
    }
    return out;
  }

  std::size_t count_outgoing(const Doi& citing) const override {
    std::size_t n = 0;
    for (auto it = primary_.lower_bound(citing);
         it != primary_.end() && it->first.citing == citing; ++it) {
      ++n;
    }
    return n;
  }

  std::size_t count_incoming(const Doi& cited) const override {
    std::size_t n = 0;
    for (auto it = by_cited_.lower_bound(cited);
         it != by_cited_.end() && it->first == cited; ++it) {
      ++n;
    }
    return n;
  }

  std::size_t size() const override { return primary_.size(); }

  std::size_t distinct_citing() const override {
    std::size_t n = 0;
    const Doi* last = nullptr;
    for (const auto& [key, value] : primary_) {
      if (!last || *last != key.citing) ++n;
      last = &key.citing;
    }
    return n;
  }

  void for_each(const std::function<void(const StoredCitation&)>& fn) const override {
    for (const auto& [key, value] : primary_) fn(value);
  }

  void commit(const std::vector<StoredCitation>& upserts) override {
    for (const auto& citation : upserts) {
      if (citation.provenance.empty()) {
        throw Error(ErrorCode::kStorageFailure, "citation without provenance");
      }
    }
    // Undo log restores the previous state if any insertion throws.
    std::vector<std::pair<CitationKey, std::optional<StoredCitation>>> undo;
    undo.reserve(upserts.size());
    try {
      for (const auto& citation : upserts) {
        auto it = primary_.find(citation.key);
        if (it != primary_.end()) {
          undo.emplace_back(citation.key, it->second);
          it->second = citation;
        } else {
          undo.emplace_back(citation.key, std::nullopt);
          primary_.emplace(citation.key, citation);
          by_cited_.emplace(citation.key.cited, citation.key.citing);
        }
      }
    } catch (...) {
      for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
        if (it->second) {
          primary_.insert_or_assign(it->first, *it->second);
        } else {
          primary_.erase(it->first);
          by_cited_.erase(std::pair<Doi, Doi>{it->first.cited, it->first.citing});
        }
      }
      throw Error(ErrorCode::kStorageFailure, "in-memory commit failed");
    }
  }

 private:
  std::map<CitationKey, StoredCitation, LeadingLess> primary_;
  std::set<std::pair<Doi, Doi>, LeadingLess> by_cited_;  // (cited, citing)
};

}  // namespace

std::unique_ptr<Store> make_memory_store() { return std::make_unique<MemoryStore>(); }

}  // namespace croci
