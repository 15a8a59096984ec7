int ok_free_after_branch(int c) {
    int *p = malloc(4);
    if (c) {
        p[0] = 1;
    }
    free(p);
    return 0;
}
