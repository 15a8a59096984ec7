int ok_free_both_branches(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    } else {
        free(p);
    }
    return 0;
}
