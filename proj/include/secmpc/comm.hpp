#pragma once

#include <deque>
#include <string>
#include <vector>

#include "secmpc/errors.hpp"
#include "secmpc/prf.hpp"

namespace secmpc {

struct CommCounters {
    u64 rounds = 0;
    u64 bits = 0;
};

// Nested round/byte meter. A simultaneous bidirectional exchange counts as one
// round; `bits` is payload only (both directions), framing tracked separately.
class CommStats {
public:
    struct Node {
        std::string tag;
        CommCounters c;
        // deque: growth never moves existing nodes, so the scope stack can
        // hold stable pointers into the tree.
        std::deque<Node> children;

        Node* child(const std::string& t) {
            for (auto& ch : children)
                if (ch.tag == t) return &ch;
            children.push_back(Node{t, {}, {}});
            return &children.back();
        }
    };

    CommStats() {
        root_.tag = "total";
        stack_.push_back(&root_);
    }

    CommStats(const CommStats& o) : root_(o.root_), framing_bytes_(o.framing_bytes_) {
        stack_.push_back(&root_);
    }
    CommStats& operator=(const CommStats& o) {
        root_ = o.root_;
        framing_bytes_ = o.framing_bytes_;
        stack_.clear();
        stack_.push_back(&root_);
        return *this;
    }

    void add_round(u64 payload_bits) {
        for (Node* n : stack_) {
            n->c.rounds += 1;
            n->c.bits += payload_bits;
        }
    }

    void add_framing_bytes(u64 bytes) { framing_bytes_ += bytes; }

    void push(const std::string& tag) { stack_.push_back(stack_.back()->child(tag)); }

    void pop() {
        if (stack_.size() <= 1) throw MeterError("meter scope underflow");
        stack_.pop_back();
    }

    CommCounters total() const { return root_.c; }
    u64 framing_bytes() const { return framing_bytes_; }
    const Node& root() const { return root_; }

    // Counters of the named child scope under the root (empty if absent).
    CommCounters tagged(const std::string& tag) const {
        for (const auto& ch : root_.children)
            if (ch.tag == tag) return ch.c;
        return {};
    }

    bool balanced() const { return stack_.size() == 1; }

private:
    Node root_;
    std::vector<Node*> stack_;
    u64 framing_bytes_ = 0;
};

// RAII scope handle; attributes everything inside to the tag (and its parents).
class MeterScope {
public:
    MeterScope(CommStats& m, std::string tag) : m_(&m) { m_->push(std::move(tag)); }
    ~MeterScope() {
        if (m_) m_->pop();
    }
    MeterScope(const MeterScope&) = delete;
    MeterScope& operator=(const MeterScope&) = delete;

private:
    CommStats* m_;
};

// Difference of two snapshots, for measuring a single protocol invocation.
inline CommCounters delta(const CommCounters& before, const CommCounters& after) {
    return {after.rounds - before.rounds, after.bits - before.bits};
}

} // namespace secmpc
