#ifndef BDOS_LEDGER_HPP
#define BDOS_LEDGER_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace bdos {

//! Opaque block identifier, assigned by issuance order. No hashes: nothing in
//! the model depends on block contents.
using BlockId = std::int64_t;

struct Block {
    BlockId id = 0;
    std::optional<BlockId> parent;  //!< absent only for genesis
    int owner = 0;                  //!< miner index or ADVERSARY_ID
    bool header_only = false;       //!< known as (H, bot): header without data
    int height = 0;                 //!< genesis has height 0
};

/** One miner's view of the block tree: full and header-only blocks plus her
 *  local first-seen order over full blocks. */
class LedgerView {
public:
    //! Records a full block (or upgrades a known header to full) and assigns
    //! the next first-seen index if the block does not have one yet.
    void add_full(Block block);

    //! Records a header-only block. Headers never get an order index.
    void add_header(Block block);

    const Block* find(BlockId id) const;
    const std::unordered_map<BlockId, Block>& blocks() const { return blocks_; }

    //! First-seen index of a full block, if assigned. Injective by construction.
    std::optional<int> order_of(BlockId id) const;

private:
    std::unordered_map<BlockId, Block> blocks_;
    std::unordered_map<BlockId, int> order_;
    int next_order_ = 0;
};

/** Path of block ids from genesis to the selected tip: the longest chain of
 *  full blocks, ties broken by the smallest first-seen index of the tip.
 *  Header-only blocks never appear in the result. */
std::vector<BlockId> main_chain(const LedgerView& view);

}  // namespace bdos

#endif
