int df_loop(int c) {
    int *p = malloc(4);
    while (c) {
        free(p);
        c = c - 1;
    }
    return 0;
}
