int ok_free_after_loop(int c) {
    int *p = malloc(4);
    int n = 0;
    while (c) {
        n = n + 1;
        c = c - 1;
    }
    free(p);
    return n;
}
