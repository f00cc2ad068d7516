#include "efg/efg.hpp"
int main() { return 0; }
