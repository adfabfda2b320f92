#include "vcsim/party_model.hpp"

#include <algorithm>

namespace vcsim::party {

namespace {

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(std::string_view s, const std::array<Enum, N>& values) {
  for (Enum v : values) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

bool is_customer_flavored(RelationshipType t) {
  return t == RelationshipType::CustomerOf || t == RelationshipType::SellerTo;
}

}  // namespace

std::string_view to_string(PartyKind k) {
  switch (k) {
    case PartyKind::Person: return "person";
    case PartyKind::Organization: return "organization";
  }
  return "?";
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::Seller: return "seller";
    case Role::Buyer: return "buyer";
    case Role::Partner: return "partner";
    case Role::Contractor: return "contractor";
    case Role::Distributor: return "distributor";
    case Role::Dealer: return "dealer";
    case Role::Agent: return "agent";
    case Role::Influencer: return "influencer";
  }
  return "?";
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::Phone: return "phone";
    case Channel::Email: return "email";
    case Channel::Postal: return "postal";
    case Channel::Web: return "web";
  }
  return "?";
}

std::string_view to_string(RelationshipType t) {
  switch (t) {
    case RelationshipType::SupplierTo: return "SupplierTo";
    case RelationshipType::DistributorFor: return "DistributorFor";
    case RelationshipType::ClientOf: return "ClientOf";
    case RelationshipType::ContractorTo: return "ContractorTo";
    case RelationshipType::ReportTo: return "ReportTo";
    case RelationshipType::ManagerOf: return "ManagerOf";
    case RelationshipType::CustomerOf: return "CustomerOf";
    case RelationshipType::SellerTo: return "SellerTo";
  }
  return "?";
}

std::string_view to_string(Segment s) { return s == Segment::B2B ? "B2B" : "B2C"; }

std::optional<PartyKind> parse_party_kind(std::string_view s) {
  return lookup(s, std::array{PartyKind::Person, PartyKind::Organization});
}

std::optional<Role> parse_role(std::string_view s) {
  return lookup(s, std::array{Role::Seller, Role::Buyer, Role::Partner, Role::Contractor, Role::Distributor,
                              Role::Dealer, Role::Agent, Role::Influencer});
}

std::optional<Channel> parse_channel(std::string_view s) {
  return lookup(s, std::array{Channel::Phone, Channel::Email, Channel::Postal, Channel::Web});
}

std::optional<RelationshipType> parse_relationship_type(std::string_view s) { return lookup(s, kAllRelationshipTypes); }

std::string_view to_string(PartyErrc e) {
  switch (e) {
    case PartyErrc::EmptyName: return "EmptyName";
    case PartyErrc::UnknownLocation: return "UnknownLocation";
    case PartyErrc::UnknownParty: return "UnknownParty";
    case PartyErrc::UnknownRelationship: return "UnknownRelationship";
    case PartyErrc::SelfRelationship: return "SelfRelationship";
    case PartyErrc::UnsupportedPair: return "UnsupportedPair";
    case PartyErrc::NegativeValue: return "NegativeValue";
    case PartyErrc::DuplicateId: return "DuplicateId";
    case PartyErrc::InvalidId: return "InvalidId";
    case PartyErrc::EmptyAddress: return "EmptyAddress";
    case PartyErrc::InvalidInterval: return "InvalidInterval";
    case PartyErrc::NotCustomerRelationship: return "NotCustomerRelationship";
    case PartyErrc::DuplicateCustomerCode: return "DuplicateCustomerCode";
    case PartyErrc::PartyInUse: return "PartyInUse";
  }
  return "?";
}

namespace {

[[noreturn]] void fail(PartyErrc code, const std::string& detail) {
  throw PartyError(code, std::string(to_string(code)) + ": " + detail);
}

}  // namespace

Registry::Registry(std::uint64_t bucket_width) : bucket_width_(bucket_width) {
  if (bucket_width_ == 0) throw std::invalid_argument("bucket width must be positive");
}

LocationId Registry::add_location(std::string label, std::string address) {
  LocationId id;
  do {
    id = LocationId("L" + std::to_string(next_location_++));
  } while (locations_.contains(id));
  locations_.emplace(id, Location{id, std::move(label), std::move(address)});
  return id;
}

void Registry::add_location(Location location) {
  if (!is_valid_token(location.id.str())) fail(PartyErrc::InvalidId, "location id '" + location.id.str() + "'");
  if (locations_.contains(location.id)) fail(PartyErrc::DuplicateId, "location " + location.id.str());
  const LocationId id = location.id;
  locations_.emplace(id, std::move(location));
}

void Registry::check_party_fields(const std::string& name, const std::vector<LocationId>& locations) const {
  if (name.empty()) fail(PartyErrc::EmptyName, "party name must be nonempty");
  for (const auto& loc : locations) {
    if (!locations_.contains(loc)) fail(PartyErrc::UnknownLocation, loc.str());
  }
}

PartyId Registry::register_party(PartyKind kind, std::string name, std::vector<LocationId> locations) {
  check_party_fields(name, locations);
  PartyId id;
  do {
    id = PartyId("P" + std::to_string(next_party_++));
  } while (parties_.contains(id));
  parties_.emplace(id, Party{id, kind, std::move(name), std::move(locations), {}, {}});
  return id;
}

void Registry::register_party(PartyId id, PartyKind kind, std::string name, std::vector<LocationId> locations) {
  if (!is_valid_token(id.str())) fail(PartyErrc::InvalidId, "party id '" + id.str() + "'");
  if (parties_.contains(id)) fail(PartyErrc::DuplicateId, "party " + id.str());
  check_party_fields(name, locations);
  parties_.emplace(id, Party{id, kind, std::move(name), std::move(locations), {}, {}});
}

void Registry::add_role(const PartyId& party, Role role) {
  auto it = parties_.find(party);
  if (it == parties_.end()) fail(PartyErrc::UnknownParty, party.str());
  it->second.roles.insert(role);
}

void Registry::add_communication_point(const PartyId& party, CommunicationPoint point) {
  auto it = parties_.find(party);
  if (it == parties_.end()) fail(PartyErrc::UnknownParty, party.str());
  if (point.address.empty()) fail(PartyErrc::EmptyAddress, "communication point of " + party.str());
  it->second.communication_points.push_back(std::move(point));
}

void Registry::remove_party(const PartyId& party) {
  if (!parties_.contains(party)) fail(PartyErrc::UnknownParty, party.str());
  for (const auto& [id, rel] : relationships_) {
    if (rel.from == party || rel.to == party) fail(PartyErrc::PartyInUse, party.str() + " referenced by " + id.str());
  }
  parties_.erase(party);
}

void Registry::check_link(const RelationshipId& id, const PartyId& from, const PartyId& to, SimTime start,
                          std::optional<SimTime> end) const {
  if (!is_valid_token(id.str())) fail(PartyErrc::InvalidId, "relationship id '" + id.str() + "'");
  if (relationships_.contains(id)) fail(PartyErrc::DuplicateId, "relationship " + id.str());
  if (from == to) fail(PartyErrc::SelfRelationship, from.str());
  if (!parties_.contains(from)) fail(PartyErrc::UnknownParty, from.str());
  if (!parties_.contains(to)) fail(PartyErrc::UnknownParty, to.str());
  if (end && *end < start) fail(PartyErrc::InvalidInterval, "relationship ends before it starts");
}

RelationshipId Registry::link_relationship(const PartyId& from, const PartyId& to, RelationshipType type,
                                           SimTime start, std::optional<SimTime> end) {
  RelationshipId id;
  do {
    id = RelationshipId("R" + std::to_string(next_relationship_++));
  } while (relationships_.contains(id));
  link_relationship(id, from, to, type, start, end);
  return id;
}

void Registry::link_relationship(RelationshipId id, const PartyId& from, const PartyId& to, RelationshipType type,
                                 SimTime start, std::optional<SimTime> end) {
  check_link(id, from, to, start, end);
  relationships_.emplace(id, CompanyRelationship{id, from, to, type, start, end});
}

void Registry::end_relationship(const RelationshipId& id, SimTime end) {
  auto it = relationships_.find(id);
  if (it == relationships_.end()) fail(PartyErrc::UnknownRelationship, id.str());
  if (end < it->second.start) fail(PartyErrc::InvalidInterval, "relationship ends before it starts");
  it->second.end = end;
}

std::vector<RelationshipType> Registry::query(const PartyId& a, const PartyId& b, std::optional<SimTime> at) const {
  std::vector<RelationshipType> out;
  for (const auto& [id, rel] : relationships_) {
    if (at && !rel.active_at(*at)) continue;
    if (rel.from == a && rel.to == b) {
      out.push_back(rel.type);
    } else if (rel.from == b && rel.to == a) {
      out.push_back(inverse_of(rel.type));
    }
  }
  return out;
}

std::optional<RelationshipId> Registry::find_link(const PartyId& a, const PartyId& b, RelationshipType type,
                                                  std::optional<SimTime> at) const {
  for (const auto& [id, rel] : relationships_) {
    if (at && !rel.active_at(*at)) continue;
    if ((rel.from == a && rel.to == b && rel.type == type) ||
        (rel.from == b && rel.to == a && rel.type == inverse_of(type))) {
      return id;
    }
  }
  return std::nullopt;
}

Segment Registry::classify(const RelationshipId& id) const {
  const auto& rel = relationship(id);
  const bool from_person = party(rel.from).kind == PartyKind::Person;
  const bool to_person = party(rel.to).kind == PartyKind::Person;
  if (from_person && to_person) fail(PartyErrc::UnsupportedPair, "person-to-person relationship " + id.str());
  return (from_person || to_person) ? Segment::B2C : Segment::B2B;
}

PartyId Registry::seller_of(const CompanyRelationship& rel) const {
  return rel.type == RelationshipType::SellerTo ? rel.from : rel.to;
}

const CustomerInfo& Registry::assign_customer_code(const RelationshipId& id, std::string code) {
  const auto& rel = relationship(id);
  if (!is_customer_flavored(rel.type)) fail(PartyErrc::NotCustomerRelationship, id.str());
  if (code.empty()) fail(PartyErrc::EmptyName, "customer code must be nonempty");
  const PartyId seller = seller_of(rel);
  for (const auto& [other_id, info] : customer_infos_) {
    if (other_id == id || info.customer_code != code) continue;
    if (seller_of(relationships_.at(other_id)) == seller) {
      fail(PartyErrc::DuplicateCustomerCode, code + " already used by seller " + seller.str());
    }
  }
  auto& slot = customer_infos_[id];
  slot = CustomerInfo{id, std::move(code)};
  return slot;
}

const CustomerPattern& Registry::record_interaction(const RelationshipId& id, SimTime at, Money value) {
  if (!relationships_.contains(id)) fail(PartyErrc::UnknownRelationship, id.str());
  if (value < 0) fail(PartyErrc::NegativeValue, std::to_string(value));

  const SimTime period{at.ticks - at.ticks % bucket_width_};
  auto [it, inserted] = patterns_.try_emplace(id, CustomerPattern{id, {}});
  auto& buckets = it->second.buckets;
  auto pos = std::lower_bound(buckets.begin(), buckets.end(), period,
                              [](const PatternBucket& b, SimTime t) { return b.period_start < t; });
  if (pos != buckets.end() && pos->period_start == period) {
    const Money total = checked_add(pos->total_value, value);
    pos->total_value = total;
    ++pos->order_count;
  } else {
    buckets.insert(pos, PatternBucket{period, 1, value});
  }
  return it->second;
}

std::set<PartyId> Registry::customers_of(const PartyId& seller, SimTime at) const {
  if (!parties_.contains(seller)) fail(PartyErrc::UnknownParty, seller.str());
  std::set<PartyId> out;
  for (const auto& [id, rel] : relationships_) {
    if (!rel.active_at(at)) continue;
    if (rel.type == RelationshipType::CustomerOf && rel.to == seller) out.insert(rel.from);
    if (rel.type == RelationshipType::SellerTo && rel.from == seller) out.insert(rel.to);
  }
  return out;
}

const Party& Registry::party(const PartyId& id) const {
  auto it = parties_.find(id);
  if (it == parties_.end()) fail(PartyErrc::UnknownParty, id.str());
  return it->second;
}

const CompanyRelationship& Registry::relationship(const RelationshipId& id) const {
  auto it = relationships_.find(id);
  if (it == relationships_.end()) fail(PartyErrc::UnknownRelationship, id.str());
  return it->second;
}

const Location& Registry::location(const LocationId& id) const {
  auto it = locations_.find(id);
  if (it == locations_.end()) fail(PartyErrc::UnknownLocation, id.str());
  return it->second;
}

const CustomerPattern* Registry::pattern(const RelationshipId& id) const {
  auto it = patterns_.find(id);
  return it == patterns_.end() ? nullptr : &it->second;
}

const CustomerInfo* Registry::customer_info(const RelationshipId& id) const {
  auto it = customer_infos_.find(id);
  return it == customer_infos_.end() ? nullptr : &it->second;
}

}  // namespace vcsim::party
