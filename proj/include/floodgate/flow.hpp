#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

namespace floodgate {

enum class Protocol : std::uint8_t { Udp, Tcp };

std::string_view to_string(Protocol p) noexcept;
Protocol parse_protocol(std::string_view text);

using NodeId = std::uint32_t;
using Port = std::uint16_t;

/// 5-tuple naming a flow.
struct FlowKey
{
  NodeId src_addr = 0;
  Port src_port = 0;
  NodeId dst_addr = 0;
  Port dst_port = 0;
  Protocol protocol = Protocol::Udp;

  friend bool operator==(const FlowKey&, const FlowKey&) = default;
  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

struct FlowKeyHash
{
  std::size_t
  operator()(const FlowKey& k) const noexcept
  {
    std::uint64_t a = (std::uint64_t{k.src_addr} << 32) | k.dst_addr;
    std::uint64_t b = (std::uint64_t{k.src_port} << 24) | (std::uint64_t{k.dst_port} << 8) |
                      static_cast<std::uint64_t>(k.protocol);
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL;
    h ^= b + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

} // namespace floodgate
