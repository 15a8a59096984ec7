int ok_exclusive_branches(int c) {
    int *p = malloc(4);
    if (c) {
        free(p);
    } else {
        *p = 1;
        free(p);
    }
    return 0;
}
