int ok_loop_alloc_free(int c) {
    int *p;
    while (c) {
        p = malloc(4);
        free(p);
        c = c - 1;
    }
    return 0;
}
