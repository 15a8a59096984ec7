int leak_calloc() {
    int *buf = calloc(4);
    buf[0] = 1;
    return 0;
}
