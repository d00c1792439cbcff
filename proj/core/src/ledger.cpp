#include "bdos/ledger.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace bdos {

void LedgerView::add_full(Block block)
{
    block.header_only = false;
    blocks_[block.id] = block;
    if (order_.find(block.id) == order_.end()) {
        order_[block.id] = next_order_++;
    }
}

void LedgerView::add_header(Block block)
{
    if (blocks_.find(block.id) != blocks_.end()) {
        return;  // already known, possibly in full
    }
    block.header_only = true;
    blocks_[block.id] = block;
}

const Block* LedgerView::find(BlockId id) const
{
    auto it = blocks_.find(id);
    return it == blocks_.end() ? nullptr : &it->second;
}

std::optional<int> LedgerView::order_of(BlockId id) const
{
    auto it = order_.find(id);
    if (it == order_.end()) return std::nullopt;
    return it->second;
}

std::vector<BlockId> main_chain(const LedgerView& view)
{
    const Block* genesis = nullptr;
    for (const auto& [id, block] : view.blocks()) {
        if (!block.parent) {
            if (genesis) throw std::invalid_argument("ledger has more than one genesis");
            genesis = &block;
        }
    }
    if (!genesis || genesis->header_only) {
        throw std::invalid_argument("ledger has no full genesis block");
    }

    // A block is chain-eligible iff it is full and every ancestor up to
    // genesis is full. Blocks hanging off a header can never be selected.
    std::unordered_map<BlockId, bool> eligible;
    auto is_eligible = [&](const Block& b, auto&& self) -> bool {
        auto it = eligible.find(b.id);
        if (it != eligible.end()) return it->second;
        bool ok = false;
        if (!b.header_only) {
            if (!b.parent) {
                ok = true;
            } else if (const Block* parent = view.find(*b.parent)) {
                ok = self(*parent, self);
            }
        }
        eligible[b.id] = ok;
        return ok;
    };

    const Block* tip = genesis;
    int tip_order = *view.order_of(genesis->id);
    for (const auto& [id, block] : view.blocks()) {
        if (!is_eligible(block, is_eligible)) continue;
        int order = view.order_of(id).value_or(std::numeric_limits<int>::max());
        if (block.height > tip->height ||
            (block.height == tip->height && order < tip_order)) {
            tip = &block;
            tip_order = order;
        }
    }

    std::vector<BlockId> path;
    for (const Block* b = tip;; b = view.find(*b->parent)) {
        path.push_back(b->id);
        if (!b->parent) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace bdos
