#pragma once

#include "pclab/train_track.hpp"

namespace pclab::detail {

// State (b, dir): branch b traversed from end dir, complementary region on the left.
struct Step {
    int b, dir;
    bool cusp;
};

struct Cycles {
    std::vector<std::vector<Step>> cycles;
    std::vector<int> cycle_of;  // per state 2b+dir
};

Step boundary_next(const TrainTrack& t, int b, int dir);
Cycles boundary_cycles(const TrainTrack& t);
int left_region(const TrainTrack& t, int b, int dir);
Word oriented_word(const TrainTrack& t, int b, int dir);

// Removes branch r, renumbering later branches and their half-branches.
void erase_branch(TrainTrack& t, int r);
void erase_switch(TrainTrack& t, int s);
void replace_half(TrainTrack& t, int s, int from, int to);
void reverse_branch(TrainTrack& t, int b);
// Moves end e of branch b to a new location; path runs from the new location to the old one.
void move_end(TrainTrack& t, int b, int e, const Word& path);
// Collapses every bigon region by folding its sides together; weights follow.
int collapse_bigons(TrainTrack& t, const std::vector<Weights*>& ws);
// Fills unlabelled branch sides (-1) from the labels found along their boundary cycles.
void repair_regions(TrainTrack& t);

}  // namespace pclab::detail
