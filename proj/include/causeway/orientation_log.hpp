#pragma once

#include <string>
#include <vector>

namespace causeway {

// One record per applied or skipped orientation step. Node payload:
// two entries for an edge a->b, three for a collider x->z<-y.
struct OrientationRecord {
    std::string rule;    // "tier", "required", "collider", "R1".."R4", "test-error", "extension"
    bool applied = true; // false = skipped
    std::vector<int> nodes;
    std::string detail;
};

class OrientationLog {
public:
    void add(std::string rule, bool applied, std::vector<int> nodes, std::string detail = {}) {
        entries_.push_back({std::move(rule), applied, std::move(nodes), std::move(detail)});
    }

    const std::vector<OrientationRecord>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    std::size_t count(const std::string& rule, bool applied) const {
        std::size_t n = 0;
        for (const auto& e : entries_)
            if (e.rule == rule && e.applied == applied) ++n;
        return n;
    }

    // Line-oriented text: rule, action, nodes, detail, tab-separated.
    std::string to_text(const std::vector<std::string>* labels = nullptr) const {
        auto name = [&](int v) {
            return labels && static_cast<std::size_t>(v) < labels->size()
                       ? (*labels)[v]
                       : std::to_string(v);
        };
        std::string out;
        for (const auto& e : entries_) {
            out += e.rule;
            out += '\t';
            out += e.applied ? "applied" : "skipped";
            out += '\t';
            if (e.nodes.size() == 2) {
                out += name(e.nodes[0]) + "->" + name(e.nodes[1]);
            } else if (e.nodes.size() == 3) {
                out += name(e.nodes[0]) + "->" + name(e.nodes[1]) + "<-" + name(e.nodes[2]);
            } else {
                for (std::size_t i = 0; i < e.nodes.size(); ++i) {
                    if (i) out += ',';
                    out += name(e.nodes[i]);
                }
            }
            if (!e.detail.empty()) {
                out += '\t';
                out += e.detail;
            }
            out += '\n';
        }
        return out;
    }

private:
    std::vector<OrientationRecord> entries_;
};

}  // namespace causeway
