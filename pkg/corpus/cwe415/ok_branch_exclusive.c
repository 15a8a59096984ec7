int ok_branch_exclusive(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    } else {
        free(p);
    }
    return 0;
}
