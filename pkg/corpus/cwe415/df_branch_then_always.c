int df_branch_then_always(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    }
    free(p);
    return 0;
}
