int ok_loop_fresh_use(int c) {
    int *p;
    while (c) {
        p = malloc(4);
        *p = c;
        free(p);
        c = c - 1;
    }
    return 0;
}
