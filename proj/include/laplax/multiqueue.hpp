#pragma once

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "laplax/util.hpp"

namespace laplax {

// Priority queue specialized for monotone key sequences: every inserted or
// decreased key equals the current minimum plus one of k fixed non-negative
// lengths. One FIFO per length class stays sorted by construction, and a
// small indexed heap over the class heads serves the global minimum.
//
// Keys never go below the running minimum, so the minimum is non-decreasing
// across any operation sequence. Not safe for concurrent mutation.
class MonotoneMultiQueue {
public:
    MonotoneMultiQueue(std::span<const double> lengths, int max_handles)
        : lengths_(lengths.begin(), lengths.end()),
          key_(std::size_t(max_handles), 0.0),
          queue_of_(std::size_t(max_handles), -1),
          prev_(std::size_t(max_handles), -1),
          next_(std::size_t(max_handles), -1),
          state_(std::size_t(max_handles), State::Absent),
          head_(lengths.size(), -1),
          tail_(lengths.size(), -1),
          heap_pos_(lengths.size(), -1) {
        for (double l : lengths_) require(l >= 0.0, "lengths must be non-negative");
    }

    bool empty() const { return size_ == 0; }
    int size() const { return size_; }
    double current_min() const { return current_min_; }
    bool contains(int h) const { return state_[std::size_t(h)] == State::Present; }
    double key(int h) const {
        require(contains(h), "handle not in queue");
        return key_[std::size_t(h)];
    }

    // Entry point at key 0 (the source distance).
    void seed(int h) { place(h, 0.0, seed_queue()); }

    // key := current minimum + lengths[j]
    void insert(int h, int j) {
        check_class(j);
        place(h, current_min_ + lengths_[std::size_t(j)], j);
    }

    // new key := current minimum + lengths[j]; rejects increases.
    void decrease_key(int h, int j) {
        check_class(j);
        require(contains(h), "decrease_key on absent element");
        double nk = current_min_ + lengths_[std::size_t(j)];
        require(nk <= key_[std::size_t(h)], "decrease_key would increase the key");
        if (nk == key_[std::size_t(h)]) return;
        int q = queue_of_[std::size_t(h)];
        if (prev_[std::size_t(h)] < 0) {
            // head: decrease in place, fix the head heap
            key_[std::size_t(h)] = nk;
            heap_sift_up(heap_pos_[std::size_t(q)]);
        } else {
            unlink(h);
            if (head_[std::size_t(q)] < 0)
                heap_remove(q);
            append(h, nk, j);
        }
    }

    std::pair<int, double> find_min() const {
        require(size_ > 0, "find_min on empty queue");
        int q = heap_[0];
        int h = head_[std::size_t(q)];
        return {h, key_[std::size_t(h)]};
    }

    std::pair<int, double> delete_min() {
        auto [h, k] = find_min();
        int q = queue_of_[std::size_t(h)];
        unlink(h);
        if (head_[std::size_t(q)] < 0)
            heap_remove(q);
        else
            heap_sift_down(heap_pos_[std::size_t(q)]);  // next head has a larger-or-equal key
        state_[std::size_t(h)] = State::Deleted;
        --size_;
        current_min_ = k;
        return {h, k};
    }

private:
    enum class State : unsigned char { Absent, Present, Deleted };

    void check_class(int j) const {
        require(j >= 0 && j < int(lengths_.size()), "length class out of range");
    }

    // lazily allocated queue for seeds (length 0 semantics)
    int seed_queue() {
        if (seed_q_ < 0) {
            seed_q_ = int(lengths_.size());
            lengths_.push_back(0.0);
            head_.push_back(-1);
            tail_.push_back(-1);
            heap_pos_.push_back(-1);
        }
        return seed_q_;
    }

    void place(int h, double k, int q) {
        require(h >= 0 && h < int(key_.size()), "handle out of range");
        require(state_[std::size_t(h)] != State::Present, "insert of an element already present");
        state_[std::size_t(h)] = State::Present;
        ++size_;
        append(h, k, q);
    }

    void append(int h, double k, int q) {
        key_[std::size_t(h)] = k;
        queue_of_[std::size_t(h)] = q;
        prev_[std::size_t(h)] = tail_[std::size_t(q)];
        next_[std::size_t(h)] = -1;
        if (tail_[std::size_t(q)] >= 0) {
            ensure(key_[std::size_t(tail_[std::size_t(q)])] <= k,
                   "queue monotonicity violated on append");
            next_[std::size_t(tail_[std::size_t(q)])] = h;
        }
        tail_[std::size_t(q)] = h;
        if (head_[std::size_t(q)] < 0) {
            head_[std::size_t(q)] = h;
            heap_insert(q);
        }
        state_[std::size_t(h)] = State::Present;
    }

    void unlink(int h) {
        int q = queue_of_[std::size_t(h)];
        int p = prev_[std::size_t(h)], nx = next_[std::size_t(h)];
        if (p >= 0)
            next_[std::size_t(p)] = nx;
        else
            head_[std::size_t(q)] = nx;
        if (nx >= 0)
            prev_[std::size_t(nx)] = p;
        else
            tail_[std::size_t(q)] = p;
        prev_[std::size_t(h)] = next_[std::size_t(h)] = -1;
    }

    // --- indexed binary heap over queues, keyed by head key (ties by id) ---

    double head_key(int q) const { return key_[std::size_t(head_[std::size_t(q)])]; }

    bool heap_less(int qa, int qb) const {
        double ka = head_key(qa), kb = head_key(qb);
        if (ka != kb) return ka < kb;
        return qa < qb;
    }

    void heap_insert(int q) {
        heap_.push_back(q);
        heap_pos_[std::size_t(q)] = int(heap_.size()) - 1;
        heap_sift_up(int(heap_.size()) - 1);
    }

    void heap_remove(int q) {
        int pos = heap_pos_[std::size_t(q)];
        int last = int(heap_.size()) - 1;
        heap_swap(pos, last);
        heap_.pop_back();
        heap_pos_[std::size_t(q)] = -1;
        if (pos <= last - 1) {
            heap_sift_down(pos);
            heap_sift_up(pos);
        }
    }

    void heap_swap(int a, int b) {
        std::swap(heap_[std::size_t(a)], heap_[std::size_t(b)]);
        heap_pos_[std::size_t(heap_[std::size_t(a)])] = a;
        heap_pos_[std::size_t(heap_[std::size_t(b)])] = b;
    }

    void heap_sift_up(int pos) {
        while (pos > 0) {
            int up = (pos - 1) / 2;
            if (!heap_less(heap_[std::size_t(pos)], heap_[std::size_t(up)])) break;
            heap_swap(pos, up);
            pos = up;
        }
    }

    void heap_sift_down(int pos) {
        int sz = int(heap_.size());
        for (;;) {
            int l = 2 * pos + 1, r = 2 * pos + 2, best = pos;
            if (l < sz && heap_less(heap_[std::size_t(l)], heap_[std::size_t(best)])) best = l;
            if (r < sz && heap_less(heap_[std::size_t(r)], heap_[std::size_t(best)])) best = r;
            if (best == pos) return;
            heap_swap(pos, best);
            pos = best;
        }
    }

    std::vector<double> lengths_;
    std::vector<double> key_;
    std::vector<int> queue_of_, prev_, next_;
    std::vector<State> state_;
    std::vector<int> head_, tail_;
    std::vector<int> heap_;
    std::vector<int> heap_pos_;
    int seed_q_ = -1;
    int size_ = 0;
    double current_min_ = 0.0;
};

} // namespace laplax
