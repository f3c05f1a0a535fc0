#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "croci/doi.hpp"
#include "croci/orcid.hpp"
#include "croci/partial_date.hpp"
#include "croci/submission.hpp"
#include "croci/timespan.hpp"

namespace croci {

struct CitationKey {
  Doi citing;
  Doi cited;

  friend bool operator==(const CitationKey&, const CitationKey&) = default;
  friend std::strong_ordering operator<=>(const CitationKey&,
                                          const CitationKey&) = default;
};

struct Provenance {
  Orcid submitter;
  std::string archive_ref;
  Timestamp received_at;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct StoredCitation {
  CitationKey key;
  std::optional<PartialDate> citing_date;
  std::optional<PartialDate> cited_date;
  std::optional<Timespan> timespan;  // present iff both dates are
  std::vector<Provenance> provenance;  // first element is the accepted source

  friend bool operator==(const StoredCitation&, const StoredCitation&) = default;
};

/// Recomputes `timespan` from the two dates.
void refresh_timespan(StoredCitation& citation);

/// Backend contract: a citation map with two orderings. Lists come back
/// sorted by the counterpart DOI. commit() applies all upserts or none.
class Store {
 public:
  virtual ~Store() = default;

  virtual std::optional<StoredCitation> find(const CitationKey& key) const = 0;
  virtual std::vector<StoredCitation> outgoing(const Doi& citing) const = 0;
  virtual std::vector<StoredCitation> incoming(const Doi& cited) const = 0;
  virtual std::size_t count_outgoing(const Doi& citing) const = 0;
  virtual std::size_t count_incoming(const Doi& cited) const = 0;
  virtual std::size_t size() const = 0;
  virtual std::size_t distinct_citing() const = 0;
  /// Visits every citation in CitationKey order.
  virtual void for_each(const std::function<void(const StoredCitation&)>& fn) const = 0;

  virtual void commit(const std::vector<StoredCitation>& upserts) = 0;
};

std::unique_ptr<Store> make_memory_store();
/// Opens (creating if needed) an on-disk store. Throws Error(kStorageFailure).
std::unique_ptr<Store> make_sqlite_store(const std::string& path);

}  // namespace croci
