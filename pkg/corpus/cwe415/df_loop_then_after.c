int df_loop_then_after(int c) {
    int *p = malloc(4);
    while (c) {
        free(p);
        c = 0;
    }
    free(p);
    return 0;
}
