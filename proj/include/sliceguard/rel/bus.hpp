#pragma once

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sliceguard::rel {

struct DuplicateRelation : std::runtime_error {
  explicit DuplicateRelation(const std::string& what) : std::runtime_error(what) {}
};
struct UnknownUnit : std::runtime_error {
  explicit UnknownUnit(const std::string& what) : std::runtime_error(what) {}
};
struct RelationDeparted : std::runtime_error {
  explicit RelationDeparted(const std::string& what) : std::runtime_error(what) {}
};

using RelationId = int;
using UnitId = std::string;

// String-only data bag, insertion order kept for display; version bumps
// once per publish.
struct RelationDataBag {
  std::vector<std::pair<std::string, std::string>> entries;
  int version = 0;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries.emplace_back(key, value);
  }
};

enum class RelationState { created, joined_one, joined_both, departed };

enum class EventKind { joined, changed, departed };

struct RelationEvent {
  EventKind kind = EventKind::joined;
  RelationId relation = 0;
  std::string name;
  UnitId origin;  // the side whose action produced the event
  int bag_version = 0;
};

struct RelationInstance {
  RelationId id = 0;
  std::string name;
  UnitId side_a;
  UnitId side_b;
  RelationDataBag bag_a;
  RelationDataBag bag_b;
  RelationState state = RelationState::created;
  std::set<UnitId> joined;
};

// Juju-relation-style exchange: each side owns a bag; the opposite side
// reads snapshots and receives version-ordered change events.
class RelationBus {
 public:
  void register_unit(const UnitId& unit);
  bool has_unit(const UnitId& unit) const;

  RelationId create_relation(const std::string& name, const UnitId& a,
                             const UnitId& b);
  void join(RelationId id, const UnitId& unit);
  int publish(RelationId id, const UnitId& unit,
              const std::vector<std::pair<std::string, std::string>>& entries);
  RelationDataBag read_remote(RelationId id, const UnitId& unit) const;
  RelationDataBag read_own(RelationId id, const UnitId& unit) const;
  void depart(RelationId id);

  std::optional<RelationEvent> next_event(const UnitId& unit);
  bool has_events(const UnitId& unit) const;

  const RelationInstance& relation(RelationId id) const;
  std::vector<RelationId> relations_of(const UnitId& unit) const;

 private:
  RelationInstance& relation_mut(RelationId id);
  const RelationInstance& member_checked(RelationId id, const UnitId& unit) const;
  void push_event(const UnitId& to, RelationEvent ev);

  mutable std::mutex mutex_;
  std::set<UnitId> units_;
  std::map<RelationId, RelationInstance> relations_;
  std::map<UnitId, std::deque<RelationEvent>> queues_;
  RelationId next_id_ = 1;
};

}  // namespace sliceguard::rel
