#include "sliceguard/rel/bus.hpp"

namespace sliceguard::rel {

void RelationBus::register_unit(const UnitId& unit) {
  std::lock_guard lock(mutex_);
  units_.insert(unit);
  queues_.try_emplace(unit);
}

bool RelationBus::has_unit(const UnitId& unit) const {
  std::lock_guard lock(mutex_);
  return units_.count(unit) > 0;
}

RelationId RelationBus::create_relation(const std::string& name, const UnitId& a,
                                        const UnitId& b) {
  std::lock_guard lock(mutex_);
  if (!units_.count(a)) throw UnknownUnit("unknown unit " + a);
  if (!units_.count(b)) throw UnknownUnit("unknown unit " + b);
  for (const auto& [id, rel] : relations_) {
    bool same_pair = (rel.side_a == a && rel.side_b == b) ||
                     (rel.side_a == b && rel.side_b == a);
    if (rel.name == name && same_pair && rel.state != RelationState::departed)
      throw DuplicateRelation("relation '" + name + "' between " + a + " and " +
                              b + " already exists");
  }
  RelationInstance rel;
  rel.id = next_id_++;
  rel.name = name;
  rel.side_a = a;
  rel.side_b = b;
  relations_.emplace(rel.id, rel);
  return rel.id;
}

void RelationBus::join(RelationId id, const UnitId& unit) {
  std::lock_guard lock(mutex_);
  RelationInstance& rel = relation_mut(id);
  if (rel.state == RelationState::departed)
    throw RelationDeparted("relation " + rel.name + " departed");
  if (unit != rel.side_a && unit != rel.side_b)
    throw UnknownUnit(unit + " is not a member of relation " + rel.name);
  if (!rel.joined.insert(unit).second) return;  // idempotent
  if (rel.joined.size() == 1) {
    rel.state = RelationState::joined_one;
  } else {
    rel.state = RelationState::joined_both;
    // both handlers are attached; tell each side about the other
    push_event(rel.side_a, {EventKind::joined, rel.id, rel.name, rel.side_b, 0});
    push_event(rel.side_b, {EventKind::joined, rel.id, rel.name, rel.side_a, 0});
  }
}

int RelationBus::publish(
    RelationId id, const UnitId& unit,
    const std::vector<std::pair<std::string, std::string>>& entries) {
  std::lock_guard lock(mutex_);
  RelationInstance& rel = relation_mut(id);
  if (rel.state == RelationState::departed)
    throw RelationDeparted("relation " + rel.name + " departed");
  if (unit != rel.side_a && unit != rel.side_b)
    throw UnknownUnit(unit + " is not a member of relation " + rel.name);
  RelationDataBag& bag = unit == rel.side_a ? rel.bag_a : rel.bag_b;
  for (const auto& [k, v] : entries) bag.set(k, v);
  bag.version += 1;
  const UnitId& other = unit == rel.side_a ? rel.side_b : rel.side_a;
  push_event(other, {EventKind::changed, rel.id, rel.name, unit, bag.version});
  return bag.version;
}

RelationDataBag RelationBus::read_remote(RelationId id, const UnitId& unit) const {
  std::lock_guard lock(mutex_);
  const RelationInstance& rel = member_checked(id, unit);
  return unit == rel.side_a ? rel.bag_b : rel.bag_a;
}

RelationDataBag RelationBus::read_own(RelationId id, const UnitId& unit) const {
  std::lock_guard lock(mutex_);
  const RelationInstance& rel = member_checked(id, unit);
  return unit == rel.side_a ? rel.bag_a : rel.bag_b;
}

void RelationBus::depart(RelationId id) {
  std::lock_guard lock(mutex_);
  RelationInstance& rel = relation_mut(id);
  if (rel.state == RelationState::departed) return;
  rel.state = RelationState::departed;
  push_event(rel.side_a, {EventKind::departed, rel.id, rel.name, rel.side_b, 0});
  push_event(rel.side_b, {EventKind::departed, rel.id, rel.name, rel.side_a, 0});
}

std::optional<RelationEvent> RelationBus::next_event(const UnitId& unit) {
  std::lock_guard lock(mutex_);
  auto it = queues_.find(unit);
  if (it == queues_.end() || it->second.empty()) return std::nullopt;
  RelationEvent ev = it->second.front();
  it->second.pop_front();
  return ev;
}

bool RelationBus::has_events(const UnitId& unit) const {
  std::lock_guard lock(mutex_);
  auto it = queues_.find(unit);
  return it != queues_.end() && !it->second.empty();
}

const RelationInstance& RelationBus::relation(RelationId id) const {
  std::lock_guard lock(mutex_);
  auto it = relations_.find(id);
  if (it == relations_.end())
    throw std::out_of_range("no relation " + std::to_string(id));
  return it->second;
}

std::vector<RelationId> RelationBus::relations_of(const UnitId& unit) const {
  std::lock_guard lock(mutex_);
  std::vector<RelationId> out;
  for (const auto& [id, rel] : relations_) {
    if (rel.side_a == unit || rel.side_b == unit) out.push_back(id);
  }
  return out;
}

RelationInstance& RelationBus::relation_mut(RelationId id) {
  auto it = relations_.find(id);
  if (it == relations_.end())
    throw std::out_of_range("no relation " + std::to_string(id));
  return it->second;
}

const RelationInstance& RelationBus::member_checked(RelationId id,
                                                    const UnitId& unit) const {
  auto it = relations_.find(id);
  if (it == relations_.end())
    throw std::out_of_range("no relation " + std::to_string(id));
  const RelationInstance& rel = it->second;
  if (unit != rel.side_a && unit != rel.side_b)
    throw UnknownUnit(unit + " is not a member of relation " + rel.name);
  return rel;
}

void RelationBus::push_event(const UnitId& to, RelationEvent ev) {
  queues_[to].push_back(ev);
}

}  // namespace sliceguard::rel
