#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace epsbasin {

/// Dense index into a system's state table.
using StateId = std::size_t;

/// Subset of a fixed universe {0, ..., n-1}, stored as a boolean array.
class StateSet {
public:
    StateSet() = default;
    explicit StateSet(std::size_t universe) : bits_(universe, false) {}
    StateSet(std::size_t universe, std::initializer_list<StateId> members) : bits_(universe, false) {
        for (StateId s : members) insert(s);
    }

    static StateSet full(std::size_t universe) {
        StateSet s(universe);
        s.bits_.assign(universe, true);
        return s;
    }

    template <class Range>
    static StateSet of(std::size_t universe, const Range& members) {
        StateSet s(universe);
        for (StateId m : members) s.insert(m);
        return s;
    }

    std::size_t universe() const { return bits_.size(); }

    bool contains(StateId s) const { return s < bits_.size() && bits_[s]; }

    void insert(StateId s) {
        if (s >= bits_.size()) throw std::out_of_range("state id outside the universe");
        bits_[s] = true;
    }
    void erase(StateId s) {
        if (s < bits_.size()) bits_[s] = false;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (bool b : bits_) n += b;
        return n;
    }
    bool empty() const { return count() == 0; }

    std::vector<StateId> members() const {
        std::vector<StateId> out;
        for (StateId i = 0; i < bits_.size(); ++i)
            if (bits_[i]) out.push_back(i);
        return out;
    }

    bool subset_of(const StateSet& other) const {
        for (StateId i = 0; i < bits_.size(); ++i)
            if (bits_[i] && !other.contains(i)) return false;
        return true;
    }

    bool intersects(const StateSet& other) const {
        for (StateId i = 0; i < bits_.size(); ++i)
            if (bits_[i] && other.contains(i)) return true;
        return false;
    }

    StateSet& operator|=(const StateSet& o) {
        for (StateId i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] || o.contains(i);
        return *this;
    }
    StateSet& operator&=(const StateSet& o) {
        for (StateId i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] && o.contains(i);
        return *this;
    }
    StateSet& operator-=(const StateSet& o) {
        for (StateId i = 0; i < bits_.size(); ++i) bits_[i] = bits_[i] && !o.contains(i);
        return *this;
    }

    friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
    friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
    friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }

    StateSet complement() const {
        StateSet c(bits_.size());
        for (StateId i = 0; i < bits_.size(); ++i) c.bits_[i] = !bits_[i];
        return c;
    }

    friend bool operator==(const StateSet&, const StateSet&) = default;

private:
    std::vector<bool> bits_;
};

}  // namespace epsbasin
