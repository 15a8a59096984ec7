int uaf_both_branches(int c) {
    int *p = malloc(4);
    free(p);
    if (c) {
        int x = *p;
        return x;
    } else {
        int y = *p;
        return y;
    }
}
