#include "anb/trace.hpp"

#include <ostream>
#include <stdexcept>

namespace anb {

void write_trace(std::ostream& os, const RunTrace& trace, const Graph& graph) {
  if (trace.level != TraceLevel::Full) throw std::invalid_argument("trace dump needs a full trace");
  for (const RoundTrace& rt : trace.rounds) {
    for (NodeId i = 0; i < rt.nodes.size(); ++i) {
      const NodeSnapshot& s = rt.nodes[i];
      os << "t=" << rt.round << " node=" << i << " state=" << state_letter(s.state)
         << " e=" << s.effective_degree << " c=" << to_fraction_string(s.count)
         << " n=" << to_fraction_string(s.final_count) << " emitted=";
      bool any = false;
      for (MessageKind kind : kAllMessageKinds) {
        const std::uint64_t envelopes = at(s.emitted, kind);
        if (envelopes == 0) continue;
        os << (any ? "," : "") << to_string(kind) << ':' << envelopes * graph.degree(i);
        any = true;
      }
      if (!any) os << '-';
      os << '\n';
    }
  }
}

}  // namespace anb
