#include <iostream>

int main() {
    std::cout << "autosmote cli placeholder\n";
    return 0;
}
