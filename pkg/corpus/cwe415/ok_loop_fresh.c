int ok_loop_fresh(int c) {
    int *p;
    while (c) {
        p = malloc(4);
        free(p);
        c = c - 1;
    }
    return 0;
}
