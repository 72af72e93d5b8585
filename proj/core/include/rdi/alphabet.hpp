#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "rdi/errors.hpp"

namespace rdi {

// Finite symbol set. Labels default to "0".."k-1".
class Alphabet {
public:
    explicit Alphabet(int size) : size_(size) {
        if (size < 1) throw UsageError("Alphabet size must be >= 1");
        labels_.reserve(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) labels_.push_back(std::to_string(i));
    }

    Alphabet(int size, std::vector<std::string> labels)
        : size_(size), labels_(std::move(labels)) {
        if (size < 1) throw UsageError("Alphabet size must be >= 1");
        if (labels_.size() != static_cast<std::size_t>(size))
            throw UsageError("Alphabet label count must equal size");
        std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size())
            throw UsageError("Alphabet labels must be distinct");
    }

    int size() const { return size_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int symbol) const { return labels_.at(static_cast<std::size_t>(symbol)); }

    bool operator==(const Alphabet& other) const {
        return size_ == other.size_ && labels_ == other.labels_;
    }

private:
    int size_;
    std::vector<std::string> labels_;
};

}  // namespace rdi
