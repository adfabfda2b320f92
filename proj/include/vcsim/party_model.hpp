#pragma once

// Trading-community model: persons and organizations, their locations and
// contact points, typed directed relationships with fixed inverses, and
// per-relationship customer behaviour buckets.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "vcsim/core.hpp"

namespace vcsim::party {

enum class PartyKind { Person, Organization };

enum class Role { Seller, Buyer, Partner, Contractor, Distributor, Dealer, Agent, Influencer };

enum class Channel { Phone, Email, Postal, Web };

// Directed relationship labels. Each label is paired with exactly one inverse.
enum class RelationshipType { SupplierTo, DistributorFor, ClientOf, ContractorTo, ReportTo, ManagerOf, CustomerOf, SellerTo };

inline constexpr std::array<RelationshipType, 8> kAllRelationshipTypes = {
    RelationshipType::SupplierTo, RelationshipType::DistributorFor, RelationshipType::ClientOf,
    RelationshipType::ContractorTo, RelationshipType::ReportTo,      RelationshipType::ManagerOf,
    RelationshipType::CustomerOf,  RelationshipType::SellerTo,
};

constexpr RelationshipType inverse_of(RelationshipType t) noexcept {
  switch (t) {
    case RelationshipType::SupplierTo: return RelationshipType::DistributorFor;
    case RelationshipType::DistributorFor: return RelationshipType::SupplierTo;
    case RelationshipType::ClientOf: return RelationshipType::ContractorTo;
    case RelationshipType::ContractorTo: return RelationshipType::ClientOf;
    case RelationshipType::ReportTo: return RelationshipType::ManagerOf;
    case RelationshipType::ManagerOf: return RelationshipType::ReportTo;
    case RelationshipType::CustomerOf: return RelationshipType::SellerTo;
    case RelationshipType::SellerTo: return RelationshipType::CustomerOf;
  }
  return t;
}

enum class Segment { B2B, B2C };

std::string_view to_string(PartyKind k);
std::string_view to_string(Role r);
std::string_view to_string(Channel c);
std::string_view to_string(RelationshipType t);
std::string_view to_string(Segment s);

std::optional<PartyKind> parse_party_kind(std::string_view s);
std::optional<Role> parse_role(std::string_view s);
std::optional<Channel> parse_channel(std::string_view s);
std::optional<RelationshipType> parse_relationship_type(std::string_view s);

using LocationId = Token<struct LocationIdTag>;
using RelationshipId = Token<struct RelationshipIdTag>;

struct Location {
  LocationId id;
  std::string label;
  std::string address;
};

struct CommunicationPoint {
  Channel channel = Channel::Email;
  std::string address;
  std::optional<std::string> purpose;
};

struct Party {
  PartyId id;
  PartyKind kind = PartyKind::Organization;
  std::string name;
  std::vector<LocationId> locations;
  std::vector<CommunicationPoint> communication_points;
  std::set<Role> roles;
};

struct CompanyRelationship {
  RelationshipId id;
  PartyId from;
  PartyId to;
  RelationshipType type = RelationshipType::SupplierTo;
  SimTime start;
  std::optional<SimTime> end;

  // Half-open validity window [start, end).
  bool active_at(SimTime at) const noexcept { return start <= at && (!end || at < *end); }
};

struct CustomerInfo {
  RelationshipId relationship;
  std::string customer_code;
};

struct PatternBucket {
  SimTime period_start;
  std::int64_t order_count = 0;
  Money total_value = 0;

  bool operator==(const PatternBucket&) const = default;
};

struct CustomerPattern {
  RelationshipId relationship;
  std::vector<PatternBucket> buckets;  // strictly ascending by period_start
};

enum class PartyErrc {
  EmptyName,
  UnknownLocation,
  UnknownParty,
  UnknownRelationship,
  SelfRelationship,
  UnsupportedPair,
  NegativeValue,
  DuplicateId,
  InvalidId,
  EmptyAddress,
  InvalidInterval,
  NotCustomerRelationship,
  DuplicateCustomerCode,
  PartyInUse,
};

std::string_view to_string(PartyErrc e);

using PartyError = Error<PartyErrc>;

class Registry {
 public:
  static constexpr std::uint64_t kDefaultBucketWidth = 10;

  explicit Registry(std::uint64_t bucket_width = kDefaultBucketWidth);

  std::uint64_t bucket_width() const noexcept { return bucket_width_; }

  LocationId add_location(std::string label, std::string address);
  void add_location(Location location);

  // Fresh-id and explicit-id forms. Both require a nonempty name and
  // resolvable locations.
  PartyId register_party(PartyKind kind, std::string name, std::vector<LocationId> locations);
  void register_party(PartyId id, PartyKind kind, std::string name, std::vector<LocationId> locations);

  void add_role(const PartyId& party, Role role);
  void add_communication_point(const PartyId& party, CommunicationPoint point);

  // Rejected with PartyInUse while any relationship references the party.
  void remove_party(const PartyId& party);

  RelationshipId link_relationship(const PartyId& from, const PartyId& to, RelationshipType type, SimTime start,
                                   std::optional<SimTime> end = std::nullopt);
  void link_relationship(RelationshipId id, const PartyId& from, const PartyId& to, RelationshipType type,
                         SimTime start, std::optional<SimTime> end = std::nullopt);
  void end_relationship(const RelationshipId& id, SimTime end);

  // Labels describing how `a` relates to `b`. Records stored as b->a are
  // reported through their inverse. With `at`, only active records count.
  std::vector<RelationshipType> query(const PartyId& a, const PartyId& b,
                                      std::optional<SimTime> at = std::nullopt) const;

  // First relationship expressing `a type b` (directly or via the inverse).
  std::optional<RelationshipId> find_link(const PartyId& a, const PartyId& b, RelationshipType type,
                                          std::optional<SimTime> at = std::nullopt) const;

  Segment classify(const RelationshipId& id) const;

  const CustomerInfo& assign_customer_code(const RelationshipId& id, std::string code);

  const CustomerPattern& record_interaction(const RelationshipId& id, SimTime at, Money value);

  std::set<PartyId> customers_of(const PartyId& seller, SimTime at) const;

  bool contains(const PartyId& id) const { return parties_.contains(id); }
  bool contains(const LocationId& id) const { return locations_.contains(id); }
  bool contains(const RelationshipId& id) const { return relationships_.contains(id); }

  const Party& party(const PartyId& id) const;
  const CompanyRelationship& relationship(const RelationshipId& id) const;
  const Location& location(const LocationId& id) const;
  const CustomerPattern* pattern(const RelationshipId& id) const;
  const CustomerInfo* customer_info(const RelationshipId& id) const;

  const std::map<PartyId, Party>& parties() const noexcept { return parties_; }
  const std::map<LocationId, Location>& locations() const noexcept { return locations_; }
  const std::map<RelationshipId, CompanyRelationship>& relationships() const noexcept { return relationships_; }
  const std::map<RelationshipId, CustomerPattern>& patterns() const noexcept { return patterns_; }

  std::size_t size() const noexcept { return parties_.size(); }

 private:
  void check_party_fields(const std::string& name, const std::vector<LocationId>& locations) const;
  void check_link(const RelationshipId& id, const PartyId& from, const PartyId& to, SimTime start,
                  std::optional<SimTime> end) const;
  PartyId seller_of(const CompanyRelationship& rel) const;

  std::uint64_t bucket_width_;
  std::uint64_t next_party_ = 1;
  std::uint64_t next_location_ = 1;
  std::uint64_t next_relationship_ = 1;
  std::map<PartyId, Party> parties_;
  std::map<LocationId, Location> locations_;
  std::map<RelationshipId, CompanyRelationship> relationships_;
  std::map<RelationshipId, CustomerInfo> customer_infos_;
  std::map<RelationshipId, CustomerPattern> patterns_;
};

}  // namespace vcsim::party
