int uaf_after_loop(int c) {
    int *p = malloc(4);
    while (c) {
        c = c - 1;
    }
    free(p);
    int x = *p;
    return x;
}
