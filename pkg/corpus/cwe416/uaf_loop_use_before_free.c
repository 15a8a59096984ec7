int uaf_loop_use_before_free(int c) {
    int *p = malloc(4);
    while (c) {
        int x = *p;
        free(p);
        c = c - 1;
    }
    return 0;
}
