#include <mobatrack/measures.hpp>

#include <array>
#include <iostream>

int main() {
    const std::array<mobatrack::GridCell, 2> cells = {mobatrack::GridCell(0, 0), mobatrack::GridCell(3, 4)};
    std::cout << "distance " << mobatrack::measures::team_distance(cells) << '\n';
}
