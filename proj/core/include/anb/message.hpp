#pragma once

#include "anb/graph.hpp"
#include "anb/rational.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string_view>
#include <variant>

namespace anb {

// The six AnB message types. The enumerator order is the inbox processing
// order within a round (echo and degree only occur before round 0).
enum class MessageKind : std::uint8_t { Echo, Degree, Leaf, Count, Reduce, Broadcast };

inline constexpr std::size_t kMessageKindCount = 6;
inline constexpr std::array<MessageKind, kMessageKindCount> kAllMessageKinds = {
    MessageKind::Echo,  MessageKind::Degree, MessageKind::Leaf,
    MessageKind::Count, MessageKind::Reduce, MessageKind::Broadcast};

constexpr std::string_view to_string(MessageKind kind) {
  switch (kind) {
    case MessageKind::Echo: return "echo";
    case MessageKind::Degree: return "degree";
    case MessageKind::Leaf: return "leaf";
    case MessageKind::Count: return "count";
    case MessageKind::Reduce: return "reduce";
    case MessageKind::Broadcast: return "broadcast";
  }
  return "?";
}

// Immutable exact value shared by a message and all of its relays.
using SharedCount = std::shared_ptr<const ExactCount>;

inline SharedCount share(ExactCount value) { return std::make_shared<const ExactCount>(std::move(value)); }

// (origin k, c_k) carried and relayed by broadcast messages.
struct BroadcastPayload {
  NodeId origin;
  SharedCount count;
  friend bool operator==(const BroadcastPayload& a, const BroadcastPayload& b) {
    return a.origin == b.origin && *a.count == *b.count;
  }
};

// Payload shape per kind:
//   echo, leaf, reduce -> std::monostate
//   degree             -> std::int64_t (initial effective degree)
//   count              -> SharedCount (c_i / e_i)
//   broadcast          -> BroadcastPayload
using MessagePayload = std::variant<std::monostate, std::int64_t, SharedCount, BroadcastPayload>;

// One envelope, delivered to every neighbor of the sender.
struct Message {
  NodeId sender;
  MessageKind kind;
  MessagePayload payload;

  static Message echo(NodeId from) { return {from, MessageKind::Echo, std::monostate{}}; }
  static Message degree(NodeId from, std::int64_t e) { return {from, MessageKind::Degree, e}; }
  static Message leaf(NodeId from) { return {from, MessageKind::Leaf, std::monostate{}}; }
  static Message count(NodeId from, ExactCount c) { return {from, MessageKind::Count, share(std::move(c))}; }
  static Message reduce(NodeId from) { return {from, MessageKind::Reduce, std::monostate{}}; }
  static Message broadcast(NodeId from, NodeId origin, ExactCount c) {
    return {from, MessageKind::Broadcast, BroadcastPayload{origin, share(std::move(c))}};
  }
  // Relay of a received broadcast; the value is shared, not copied.
  static Message relay(NodeId from, const BroadcastPayload& payload) {
    return {from, MessageKind::Broadcast, payload};
  }

  // True when the payload alternative matches the kind and values are present.
  bool well_formed() const;

  // The exact value of a count or broadcast message.
  const ExactCount& value() const;
  std::int64_t degree_value() const { return std::get<std::int64_t>(payload); }
  const BroadcastPayload& broadcast_payload() const { return std::get<BroadcastPayload>(payload); }

  friend bool operator==(const Message& a, const Message& b);
};

// Total order used for inbox processing: kind, then origin for broadcasts,
// then sender.
bool inbox_less(const Message& a, const Message& b);

}  // namespace anb
