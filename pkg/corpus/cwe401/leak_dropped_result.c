int leak_dropped_result() {
    malloc(16);
    return 0;
}
