int uaf_branch(int c) {
    int *p = malloc(4);
    free(p);
    if (c) {
        int x = *p;
        return x;
    }
    return 0;
}
