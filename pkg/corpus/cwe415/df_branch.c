int df_branch(int c) {
    int *p = malloc(4);
    free(p);
    if (c) {
        free(p);
    }
    return 0;
}
