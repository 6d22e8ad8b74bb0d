#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace lexo {

// Fixed-capacity ring of reusable slots. Pushing into a full ring recycles
// the oldest slot in place, so element storage (and any capacity the element
// itself holds) is reused across pushes.
template <class T>
class RingBuffer {
public:
    explicit RingBuffer(std::size_t capacity) : slots_(capacity) {
        if (capacity == 0) throw std::invalid_argument("ring buffer capacity must be positive");
    }

    std::size_t capacity() const noexcept { return slots_.size(); }
    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    bool full() const noexcept { return size_ == slots_.size(); }

    // Slot for the next element; becomes back(0).
    T& push_slot() {
        head_ = (head_ + 1) % slots_.size();
        if (size_ < slots_.size()) ++size_;
        return slots_[head_];
    }

    // age 0 is the newest element.
    const T& back(std::size_t age) const {
        if (age >= size_) throw std::out_of_range("ring buffer age out of range");
        return slots_[(head_ + slots_.size() - age) % slots_.size()];
    }

    T& back(std::size_t age) {
        if (age >= size_) throw std::out_of_range("ring buffer age out of range");
        return slots_[(head_ + slots_.size() - age) % slots_.size()];
    }

    void clear() noexcept {
        size_ = 0;
        head_ = 0;
    }

private:
    std::vector<T> slots_;
    std::size_t head_ = 0;
    std::size_t size_ = 0;
};

} // namespace lexo
