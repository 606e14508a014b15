// In-process stand-ins for the two transport classes: a reliable ordered
// queue for commands and a bounded, drop-oldest buffer for telemetry.
#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <vector>

namespace gcs {

/// Multi-producer FIFO: items come out in exactly the order they went in.
template <typename T> class OrderedChannel {
public:
    void push(T item) {
        {
            std::lock_guard lock(mutex_);
            items_.push_back(std::move(item));
        }
        ready_.notify_one();
    }

    std::optional<T> try_pop() {
        std::lock_guard lock(mutex_);
        if (items_.empty()) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    /// Removes and returns everything queued so far, oldest first.
    std::vector<T> drain() {
        std::lock_guard lock(mutex_);
        std::vector<T> out(std::make_move_iterator(items_.begin()), std::make_move_iterator(items_.end()));
        items_.clear();
        return out;
    }

    std::size_t size() const {
        std::lock_guard lock(mutex_);
        return items_.size();
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<T> items_;
};

/// Bounded buffer that discards the oldest item when full. Each item must be
/// self-contained, since any of them may be lost.
template <typename T> class LossyChannel {
public:
    explicit LossyChannel(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    /// Returns true when an older item had to be dropped.
    bool push(T item) {
        std::lock_guard lock(mutex_);
        bool dropped = false;
        if (items_.size() == capacity_) {
            items_.pop_front();
            ++dropped_;
            dropped = true;
        }
        items_.push_back(std::move(item));
        return dropped;
    }

    std::optional<T> try_pop() {
        std::lock_guard lock(mutex_);
        if (items_.empty()) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        return item;
    }

    std::size_t dropped() const {
        std::lock_guard lock(mutex_);
        return dropped_;
    }

private:
    mutable std::mutex mutex_;
    std::size_t capacity_;
    std::deque<T> items_;
    std::size_t dropped_ = 0;
};

} // namespace gcs
