int df_both_branches_then_always(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    } else {
        free(p);
    }
    free(p);
    return 0;
}
