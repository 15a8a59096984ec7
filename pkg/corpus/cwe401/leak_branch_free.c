int leak_branch_free(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    }
    return 0;
}
