#pragma once

#include <cstddef>
#include <string>

namespace fogsched {

// Outcome of scheduling one arriving task: an edge ARC group, the cloud via
// the channel of a destination area, or blocking.
class Decision {
 public:
  enum class Kind : unsigned char { Edge, Cloud, Block };

  constexpr Decision() = default;

  static constexpr Decision edge(std::size_t group) { return {Kind::Edge, group}; }
  static constexpr Decision cloud(std::size_t area) { return {Kind::Cloud, area}; }
  static constexpr Decision block() { return {Kind::Block, 0}; }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_edge() const { return kind_ == Kind::Edge; }
  constexpr bool is_cloud() const { return kind_ == Kind::Cloud; }
  constexpr bool is_block() const { return kind_ == Kind::Block; }

  // Group index for Edge, area index for Cloud; zero for Block.
  constexpr std::size_t index() const { return index_; }

  friend constexpr bool operator==(const Decision&, const Decision&) = default;

 private:
  constexpr Decision(Kind kind, std::size_t index) : kind_(kind), index_(index) {}

  Kind kind_ = Kind::Block;
  std::size_t index_ = 0;
};

std::string to_string(const Decision& d);

}  // namespace fogsched
