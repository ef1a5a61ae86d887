#pragma once

#include <string>
#include <vector>

#include "mcdp/dpi.hpp"

namespace mcdp {

struct PortRef {
  std::size_t node = 0;
  std::size_t port = 0;  // factor index in the node's F or R product
  friend bool operator==(const PortRef&, const PortRef&) = default;
};

// The consumer's resource is provided by the provider's functionality.
struct NetworkLink {
  PortRef consumer_res;
  PortRef provider_fun;
};

/// Loop-free interconnection of product-shaped design problems. Every
/// functionality port is either exposed or the provider end of one link;
/// every resource port is either exposed or the consumer end of one link.
struct NetworkSpec {
  std::vector<std::string> names;
  std::vector<DpiPtr> nodes;
  std::vector<PortRef> exposed_funs;  // factor order of the composite F
  std::vector<PortRef> exposed_res;   // factor order of the composite R
  std::vector<NetworkLink> links;
};

/// Composite of a loop-free network. h is evaluated by folding the nodes in
/// topological order (consumers before providers): each step is the series
/// composition of the running front with the next node, in parallel with
/// identities on the ports that stay open, followed by Pareto pruning on the
/// ports still needed downstream. h' folds in the reverse order.
/// Witnesses have one part per node, keyed by node name.
DpiPtr network(NetworkSpec spec);

}  // namespace mcdp
