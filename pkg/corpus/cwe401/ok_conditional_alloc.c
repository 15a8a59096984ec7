int ok_conditional_alloc(int c) {
    int *p;
    if (c) {
        p = malloc(4);
        free(p);
    }
    return 0;
}
