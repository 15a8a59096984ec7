int ok_two_pointers() {
    int *p = malloc(4);
    int *q = malloc(4);
    free(p);
    free(q);
    return 0;
}
